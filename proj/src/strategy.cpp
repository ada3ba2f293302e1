#include "gpdevopt/strategy.hpp"

#include "gpdevopt/direct.hpp"
#include "gpdevopt/errors.hpp"
#include "gpdevopt/kmeans.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

namespace gpdev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string lowered(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Appends a run's trace after `offset` FEs, keeping the running best monotone.
void append_trace(std::vector<TracePoint>& trace, const std::vector<TracePoint>& run,
                  std::int64_t offset) {
    double best = trace.empty() ? kInf : trace.back().best_value;
    for (const auto& tp : run) {
        if (tp.best_value < best) {
            best = tp.best_value;
            trace.push_back({offset + tp.fe, best});
        }
    }
}

// Combines the global phase and local runs into one report.
StrategyReport assemble(StrategyId id, std::int64_t global_fe, const OptReport* global,
                        std::vector<TracePoint> global_trace, std::vector<Eigen::VectorXd> starts,
                        std::vector<OptReport> runs) {
    StrategyReport out;
    out.strategy = id;
    out.global_fe = global_fe;
    out.starts = std::move(starts);
    OptReport& all = out.overall;
    all.trace = std::move(global_trace);
    if (global) {
        all.beta_star = global->beta_star;
        all.value = global->value;
    }
    std::int64_t fe = global_fe;
    for (const auto& run : runs) {
        append_trace(all.trace, run.trace, fe);
        fe += run.fe_used;
        if (run.beta_star.size() > 0 && (run.value < all.value || all.beta_star.size() == 0)) {
            all.beta_star = run.beta_star;
            all.value = run.value;
        }
        all.warnings.insert(all.warnings.end(), run.warnings.begin(), run.warnings.end());
    }
    all.fe_used = fe;
    if (all.trace.empty() || all.trace.back().fe != fe) all.trace.push_back({fe, all.value});
    out.local_runs = std::move(runs);
    return out;
}

IfOptions if_options(std::size_t d, const StrategyOptions& options) {
    IfOptions opts;
    opts.box = if_beta_box(d, options.box_scale);
    opts.scales = options.if_scales;
    return opts;
}

std::vector<OptReport> run_local(const Objective& objective, const std::vector<Eigen::VectorXd>& starts,
                                 bool use_bfgs, std::size_t d, const StrategyOptions& options) {
    std::vector<OptReport> runs(starts.size());
    const IfOptions ifo = if_options(d, options);
    const auto count = static_cast<std::int64_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        runs[idx] = use_bfgs ? bfgs_minimize(objective, starts[idx], options.bfgs)
                             : implicit_filtering(objective, starts[idx], ifo);
    }
    return runs;
}

StrategyReport multistart(const Objective& objective, StrategyId id, std::size_t d,
                          std::size_t centers, bool diagonal, bool use_bfgs,
                          const StrategyOptions& options) {
    Rng rng(options.seed);
    const SearchBox box = default_beta_box(d, options.box_scale);
    ClusterStarts cs = cluster_starts(objective, box, centers, diagonal, rng, options);
    std::vector<OptReport> runs = run_local(objective, cs.starts, use_bfgs, d, options);

    OptReport sampled;
    sampled.value = kInf;
    for (Eigen::Index i = 0; i < cs.sample_values.size(); ++i) {
        if (cs.sample_values[i] < sampled.value) {
            sampled.value = cs.sample_values[i];
            sampled.beta_star = cs.sample.row(i).transpose();
        }
    }
    if (sampled.beta_star.size() == 0 && cs.sample.rows() > 0) sampled.beta_star = cs.sample.row(0).transpose();
    return assemble(id, cs.fe_used, &sampled, cs.trace, cs.starts, std::move(runs));
}

StrategyReport two_stage_if(const Objective& objective, std::size_t d,
                            const StrategyOptions& options) {
    Rng rng(options.seed);
    const SearchBox box = default_beta_box(d, options.box_scale);
    ClusterStarts cs = cluster_starts(objective, box, half_dimension_starts(d), false, rng, options);
    const IfOptions ifo = if_options(d, options);
    const auto cap = static_cast<std::int64_t>(options.if2_cap_per_dim * d);

    std::vector<std::unique_ptr<ImplicitFilter>> filters(cs.starts.size());
    const auto count = static_cast<std::int64_t>(cs.starts.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        filters[idx] = std::make_unique<ImplicitFilter>(objective, cs.starts[idx], ifo);
        filters[idx]->run(cap);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < filters.size(); ++i)
        if (filters[i]->value() < filters[best]->value()) best = i;
    filters[best]->run(std::nullopt);

    std::vector<OptReport> runs;
    for (const auto& f : filters) runs.push_back(f->report());
    OptReport sampled;
    sampled.value = kInf;
    for (Eigen::Index i = 0; i < cs.sample_values.size(); ++i) {
        if (cs.sample_values[i] < sampled.value) {
            sampled.value = cs.sample_values[i];
            sampled.beta_star = cs.sample.row(i).transpose();
        }
    }
    return assemble(StrategyId::If2, cs.fe_used, &sampled, cs.trace, cs.starts, std::move(runs));
}

StrategyReport direct_hybrid(const Objective& objective, StrategyId id, std::size_t d,
                             bool use_bfgs, const StrategyOptions& options) {
    const SearchBox box = default_beta_box(d, options.box_scale);
    DirectOptions dopts;
    dopts.fe_budget = static_cast<std::int64_t>(options.direct_budget_per_dim * d);
    dopts.epsilon = options.direct_epsilon;
    OptReport global = direct_search(objective, box, dopts);
    std::vector<Eigen::VectorXd> starts{global.beta_star};
    std::vector<OptReport> runs = run_local(objective, starts, use_bfgs, d, options);
    return assemble(id, global.fe_used, &global, global.trace, std::move(starts), std::move(runs));
}

}  // namespace

std::string_view to_string(StrategyId id) {
    switch (id) {
        case StrategyId::MsBfgs2d1: return "MS-BFGS-2d1";
        case StrategyId::MsBfgsHalfd: return "MS-BFGS-halfd";
        case StrategyId::MsIf2d1: return "MS-IF-2d1";
        case StrategyId::MsIfHalfd: return "MS-IF-halfd";
        case StrategyId::If2: return "IF2";
        case StrategyId::DirectBfgs: return "DIRECT-BFGS";
        case StrategyId::DirectIf: return "DIRECT-IF";
    }
    return "unknown";
}

StrategyId parse_strategy(std::string_view name) {
    const std::string key = lowered(name);
    for (const StrategyId id : kAllStrategies)
        if (lowered(to_string(id)) == key) return id;
    if (key == "if-2") return StrategyId::If2;
    throw InvalidInput("unknown strategy '" + std::string(name) + "'");
}

std::size_t half_dimension_starts(std::size_t d) { return (d + 1) / 2; }

ClusterStarts cluster_starts(const Objective& objective, const SearchBox& box,
                             std::size_t n_centers, bool include_diagonal, Rng& rng,
                             const StrategyOptions& options) {
    const std::size_t d = box.dim();
    if (d < 1) throw InvalidInput("cluster_starts needs a non-empty box");
    const std::size_t n_sample = options.sample_per_dim * d;
    const std::size_t n_keep = std::min(options.keep_per_dim * d, n_sample);
    if (n_centers < 1 || n_centers > n_keep)
        throw InvalidInput("number of cluster centres must be between 1 and the retained count");

    ClusterStarts out;
    out.sample = lhd_maximin(n_sample, box, rng, options.lhd_candidates);
    out.sample_values.resize(static_cast<Eigen::Index>(n_sample));
    const auto ns = static_cast<std::int64_t>(n_sample);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < ns; ++i)
        out.sample_values[i] = objective(out.sample.row(i).transpose());
    out.fe_used = ns;

    double best = kInf;
    for (std::int64_t i = 0; i < ns; ++i) {
        if (out.sample_values[i] < best) {
            best = out.sample_values[i];
            out.trace.push_back({i + 1, best});
        }
    }

    std::vector<std::size_t> order(n_sample);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.sample_values[static_cast<Eigen::Index>(a)] <
               out.sample_values[static_cast<Eigen::Index>(b)];
    });
    out.retained.resize(static_cast<Eigen::Index>(n_keep), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n_keep; ++i)
        out.retained.row(static_cast<Eigen::Index>(i)) =
            out.sample.row(static_cast<Eigen::Index>(order[i]));

    const KMeansResult km = kmeans_best_of(out.retained, n_centers, options.kmeans_restarts, rng);
    out.kmeans_restart_sse = km.restart_sse;
    out.kmeans_sse = km.sse;
    for (Eigen::Index c = 0; c < km.centers.rows(); ++c)
        out.starts.push_back(box.clamp(km.centers.row(c).transpose()));

    if (include_diagonal) {
        Eigen::VectorXd best_diag;
        double best_value = kInf;
        for (const double t : {0.25, 0.5, 0.75}) {
            const Eigen::VectorXd p = box.lower() + t * box.range();
            const double v = objective(p);
            ++out.fe_used;
            ++out.diagonal_fe;
            if (v < best) {
                best = v;
                out.trace.push_back({out.fe_used, best});
            }
            if (v < best_value || best_diag.size() == 0) {
                best_value = v;
                best_diag = p;
            }
        }
        out.starts.push_back(best_diag);
    }
    return out;
}

StrategyReport run_strategy(const Objective& objective, StrategyId strategy, std::size_t d,
                            const StrategyOptions& options) {
    if (d < 1) throw InvalidInput("dimension must be at least 1");
    switch (strategy) {
        case StrategyId::MsBfgs2d1:
            return multistart(objective, strategy, d, 2 * d, true, true, options);
        case StrategyId::MsBfgsHalfd:
            return multistart(objective, strategy, d, half_dimension_starts(d), false, true, options);
        case StrategyId::MsIf2d1:
            return multistart(objective, strategy, d, 2 * d, true, false, options);
        case StrategyId::MsIfHalfd:
            return multistart(objective, strategy, d, half_dimension_starts(d), false, false, options);
        case StrategyId::If2:
            return two_stage_if(objective, d, options);
        case StrategyId::DirectBfgs:
            return direct_hybrid(objective, strategy, d, true, options);
        case StrategyId::DirectIf:
            return direct_hybrid(objective, strategy, d, false, options);
    }
    throw InvalidInput("unknown strategy");
}

}  // namespace gpdev
