#pragma once

#include "gpdevopt/bfgs.hpp"
#include "gpdevopt/implicit_filtering.hpp"
#include "gpdevopt/lhd.hpp"
#include "gpdevopt/opt_report.hpp"
#include "gpdevopt/search_box.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gpdev {

/// The seven deviance-minimization strategies.
enum class StrategyId {
    MsBfgs2d1,    ///< 2d cluster centres + best diagonal point, BFGS from each
    MsBfgsHalfd,  ///< ceil(d/2) cluster centres, BFGS from each
    MsIf2d1,      ///< as MsBfgs2d1 with Implicit Filtering
    MsIfHalfd,    ///< as MsBfgsHalfd with Implicit Filtering
    If2,          ///< ceil(d/2) IF runs capped at 20d FEs, best one finished
    DirectBfgs,   ///< DIRECT with a 200d budget, then one BFGS run
    DirectIf,     ///< DIRECT with a 200d budget, then one IF run
};

inline constexpr std::array<StrategyId, 7> kAllStrategies = {
    StrategyId::MsBfgsHalfd, StrategyId::MsBfgs2d1, StrategyId::MsIfHalfd, StrategyId::MsIf2d1,
    StrategyId::If2,         StrategyId::DirectBfgs, StrategyId::DirectIf};

std::string_view to_string(StrategyId id);
/// Accepts the canonical names (e.g. "DIRECT-BFGS", "MS-BFGS-halfd"), case-insensitively.
StrategyId parse_strategy(std::string_view name);

struct StrategyOptions {
    double box_scale = 1.0;
    BfgsOptions bfgs;
    std::vector<double> if_scales;  ///< empty: 2^-1 .. 2^-7
    std::uint64_t seed = 0;
    std::size_t lhd_candidates = 50;
    std::size_t kmeans_restarts = 5;
    double direct_epsilon = 1e-4;
    /// Start-sample multiplier (200d points) and retained count (80d).
    std::size_t sample_per_dim = 200;
    std::size_t keep_per_dim = 80;
    std::size_t direct_budget_per_dim = 200;
    std::size_t if2_cap_per_dim = 20;
};

/// Result of the sampling and clustering start-point generator.
struct ClusterStarts {
    std::vector<Eigen::VectorXd> starts;
    std::int64_t fe_used = 0;
    std::int64_t diagonal_fe = 0;
    Eigen::MatrixXd sample;         ///< all evaluated sample points
    Eigen::VectorXd sample_values;
    Eigen::MatrixXd retained;       ///< best keep_per_dim*d rows of the sample
    std::vector<double> kmeans_restart_sse;
    double kmeans_sse = 0.0;
    std::vector<TracePoint> trace;
};

/// Evaluates the objective on a maximin LHD of sample_per_dim*d points in the
/// box, keeps the best keep_per_dim*d, clusters them into n_centers groups
/// (best of kmeans_restarts k-means runs) and, if requested, appends the best
/// of three equidistant points on the box diagonal.
ClusterStarts cluster_starts(const Objective& objective, const SearchBox& box,
                             std::size_t n_centers, bool include_diagonal, Rng& rng,
                             const StrategyOptions& options = {});

/// Breakdown of a strategy run. `overall` is the global best over all phases
/// and overall.fe_used = global_fe + sum of local_runs[i].fe_used.
struct StrategyReport {
    OptReport overall;
    StrategyId strategy = StrategyId::DirectBfgs;
    std::int64_t global_fe = 0;  ///< sampling + diagonal, or DIRECT
    std::vector<Eigen::VectorXd> starts;
    std::vector<OptReport> local_runs;
};

std::size_t half_dimension_starts(std::size_t d);

/// Runs one strategy on a d-dimensional objective. Local runs from several
/// starts execute concurrently, so the objective must be thread-safe.
StrategyReport run_strategy(const Objective& objective, StrategyId strategy, std::size_t d,
                            const StrategyOptions& options = {});

}  // namespace gpdev
