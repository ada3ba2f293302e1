#include "gpdevopt/benchmark.hpp"

#include "gpdevopt/errors.hpp"
#include "gpdevopt/lhd.hpp"
#include "gpdevopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpdev {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

bool shares_row(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
            if (a.row(i) == b.row(j)) return true;
    return false;
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master, std::size_t replicate) {
    return splitmix64(master + replicate);
}

ReplicateData make_replicate_data(const TestFunction& fn, std::size_t replicate,
                                  const BenchmarkConfig& config) {
    Rng rng(config.seed + replicate);
    ReplicateData out;
    out.train = unit_lhd_maximin(config.train_per_dim * fn.d, fn.d, rng);
    do {
        out.validate = unit_lhd_maximin(config.validate_per_dim * fn.d, fn.d, rng);
    } while (shares_row(out.train, out.validate));
    out.train_y = fn.evaluate(out.train);
    out.validate_y = fn.evaluate(out.validate);
    return out;
}

void compute_percent_deltas(std::vector<BenchmarkResult>& rows) {
    auto fill = [&rows](auto get, auto set) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& r : rows)
            if (r.replicates > 0) best = std::min(best, get(r));
        for (auto& r : rows)
            set(r, r.replicates > 0 ? percent_delta(get(r), best)
                                    : std::numeric_limits<double>::quiet_NaN());
    };
    fill([](const BenchmarkResult& r) { return r.mean_deviance; },
         [](BenchmarkResult& r, double v) { r.pct_deviance = v; });
    fill([](const BenchmarkResult& r) { return r.mean_rmspe; },
         [](BenchmarkResult& r, double v) { r.pct_rmspe = v; });
    fill([](const BenchmarkResult& r) { return r.mean_fe; },
         [](BenchmarkResult& r, double v) { r.pct_fe = v; });
}

BenchmarkRun run_benchmark(const TestFunction& fn, const BenchmarkConfig& config) {
    if (config.replicates < 1) throw InvalidInput("benchmark needs at least one replicate");
    if (config.strategies.empty()) throw InvalidInput("benchmark needs at least one strategy");
    const std::size_t ns = config.strategies.size();

    BenchmarkRun run;
    run.function = fn.name;
    run.d = fn.d;
    run.records.resize(config.replicates * ns);

    const auto reps = static_cast<std::int64_t>(config.replicates);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ri = 0; ri < reps; ++ri) {
        const auto r = static_cast<std::size_t>(ri);
        const ReplicateData data = make_replicate_data(fn, r, config);
        const DesignSet design(data.train, data.train_y);
        FitOptions fopts;
        fopts.deviance = config.deviance;
        fopts.search = config.search;
        fopts.search.seed = replicate_seed(config.seed, r);
        for (std::size_t s = 0; s < ns; ++s) {
            ReplicateRecord& rec = run.records[r * ns + s];
            rec.replicate = r;
            rec.strategy = config.strategies[s];
            if (config.observer) {
                fopts.observer = [&config, r, id = rec.strategy](const Eigen::VectorXd& beta,
                                                                 double value) {
                    config.observer(r, id, beta, value);
                };
            }
            try {
                FitResult fitted = fit_detailed(design, rec.strategy, fopts);
                Eigen::VectorXd pred(data.validate.rows());
                const auto preds = fitted.model.predict_many(data.validate);
                for (std::size_t i = 0; i < preds.size(); ++i)
                    pred[static_cast<Eigen::Index>(i)] = preds[i].y_hat;
                rec.fitted = true;
                rec.deviance = fitted.model.deviance();
                rec.rmspe = rmspe(data.validate_y, pred);
                rec.fe = fitted.model.fe_count();
                rec.delta = fitted.model.delta();
                rec.beta = fitted.model.beta();
            } catch (const Error& e) {
                rec.fitted = false;
                rec.error = e.what();
            }
        }
    }

    for (std::size_t s = 0; s < ns; ++s) {
        BenchmarkResult row;
        row.strategy = config.strategies[s];
        std::vector<double> rmspes;
        double dev = 0.0;
        double fe = 0.0;
        for (std::size_t r = 0; r < config.replicates; ++r) {
            const ReplicateRecord& rec = run.records[r * ns + s];
            if (!rec.fitted) {
                ++row.failures;
                continue;
            }
            rmspes.push_back(rec.rmspe);
            dev += rec.deviance;
            fe += static_cast<double>(rec.fe);
        }
        row.replicates = rmspes.size();
        if (row.replicates > 0) {
            const auto n = static_cast<double>(row.replicates);
            row.mean_deviance = dev / n;
            row.mean_fe = fe / n;
            double sum = 0.0;
            for (const double v : rmspes) sum += v;
            row.mean_rmspe = sum / n;
            row.rmspe_std_err = rmspes.size() >= 2 ? rmspe_std_err(rmspes) : 0.0;
        }
        if (row.failures > 0)
            run.warnings.push_back(std::string(to_string(row.strategy)) + ": " +
                                   std::to_string(row.failures) +
                                   " replicate(s) unfittable and excluded from means");
        run.rows.push_back(row);
    }
    compute_percent_deltas(run.rows);
    return run;
}

}  // namespace gpdev
