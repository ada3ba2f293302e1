#pragma once

#include "gpdevopt/gp_model.hpp"
#include "gpdevopt/strategy.hpp"

#include <functional>

namespace gpdev {

struct FitOptions {
    DevianceOptions deviance;
    StrategyOptions search;
    /// Called once per deviance evaluation (possibly from several threads).
    std::function<void(const Eigen::VectorXd& beta, double value)> observer;
};

struct FitResult {
    FittedGP model;
    StrategyReport report;
};

/// Minimizes the deviance over beta with `strategy` and conditions the GP on
/// the minimizer. fe_count counts every deviance evaluation made by the search.
/// Throws DegenerateDesign for a constant response and Unfittable when every
/// evaluation was infinite.
FitResult fit_detailed(const DesignSet& design, StrategyId strategy,
                       const FitOptions& options = {});

inline FittedGP fit(const DesignSet& design, StrategyId strategy, const FitOptions& options = {}) {
    return fit_detailed(design, strategy, options).model;
}

}  // namespace gpdev
