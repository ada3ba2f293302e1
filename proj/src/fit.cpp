#include "gpdevopt/fit.hpp"

#include "gpdevopt/errors.hpp"

#include <atomic>
#include <cmath>

namespace gpdev {

FitResult fit_detailed(const DesignSet& design, StrategyId strategy, const FitOptions& options) {
    const DevianceFunction deviance(design, options.deviance);
    std::atomic<std::int64_t> calls{0};
    const Objective objective = [&](const Eigen::VectorXd& beta) {
        const double v = deviance(beta);
        calls.fetch_add(1, std::memory_order_relaxed);
        if (options.observer) options.observer(beta, v);
        return v;
    };

    StrategyReport report = run_strategy(objective, strategy, design.dim(), options.search);
    if (report.overall.fe_used != calls.load())
        throw Error("internal FE accounting mismatch: reported " +
                    std::to_string(report.overall.fe_used) + ", evaluated " +
                    std::to_string(calls.load()));
    if (!std::isfinite(report.overall.value))
        throw Unfittable("every deviance evaluation was infinite");
    try {
        FittedGP model(deviance, report.overall.beta_star, report.overall.fe_used);
        return FitResult{std::move(model), std::move(report)};
    } catch (const IllConditioned& e) {
        throw Unfittable(std::string("optimum could not be refactored: ") + e.what());
    }
}

}  // namespace gpdev
