#pragma once

#include "gpdevopt/fit.hpp"
#include "gpdevopt/test_functions.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gpdev {

struct BenchmarkConfig {
    std::vector<StrategyId> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    std::size_t replicates = 25;
    std::uint64_t seed = 1;
    DevianceOptions deviance;
    StrategyOptions search;  ///< seed is replaced per replicate
    std::size_t train_per_dim = 10;
    std::size_t validate_per_dim = 100;
    /// Optional hook called for every deviance evaluation of every fit.
    std::function<void(std::size_t replicate, StrategyId strategy, const Eigen::VectorXd& beta,
                       double value)>
        observer;
};

/// One strategy on one replicate.
struct ReplicateRecord {
    std::size_t replicate = 0;
    StrategyId strategy = StrategyId::DirectBfgs;
    bool fitted = false;
    double deviance = 0.0;
    double rmspe = 0.0;
    std::int64_t fe = 0;
    double delta = 0.0;
    Eigen::VectorXd beta;
    std::string error;
};

/// Aggregate over replicates for one strategy. The pct_* columns are the
/// percent difference to the best strategy for that metric (lower is better).
struct BenchmarkResult {
    StrategyId strategy = StrategyId::DirectBfgs;
    double mean_deviance = 0.0;
    double mean_rmspe = 0.0;
    double rmspe_std_err = 0.0;
    double mean_fe = 0.0;
    std::size_t replicates = 0;  ///< replicates that fitted
    std::size_t failures = 0;    ///< replicates excluded as unfittable
    double pct_deviance = 0.0;
    double pct_rmspe = 0.0;
    double pct_fe = 0.0;
};

struct BenchmarkRun {
    std::string function;
    std::size_t d = 0;
    std::vector<BenchmarkResult> rows;
    std::vector<ReplicateRecord> records;  ///< replicate-major, strategy order within
    std::vector<std::string> warnings;
};

/// Training (train_per_dim*d) and validation (validate_per_dim*d) maximin
/// LHDs for one replicate, guaranteed disjoint.
struct ReplicateData {
    Eigen::MatrixXd train;
    Eigen::VectorXd train_y;
    Eigen::MatrixXd validate;
    Eigen::VectorXd validate_y;
};
ReplicateData make_replicate_data(const TestFunction& fn, std::size_t replicate,
                                  const BenchmarkConfig& config);

/// Seed used by every strategy's internal RNG within one replicate.
std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate);

/// Fits every strategy on every replicate (replicates in parallel, each with
/// RNG seed derived from master seed + replicate index) and aggregates.
BenchmarkRun run_benchmark(const TestFunction& fn, const BenchmarkConfig& config);

/// Fills pct_* columns of `rows` from their means.
void compute_percent_deltas(std::vector<BenchmarkResult>& rows);

}  // namespace gpdev
