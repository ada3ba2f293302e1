#pragma once

#include "gpdevopt/opt_report.hpp"

#include <cstdint>
#include <optional>

namespace gpdev {

struct BfgsOptions {
    double grad_step = 1e-6;  ///< relative central-difference step, scaled by max(1, |x_k|)
    double grad_tol = 1e-6;   ///< stop when the infinity norm of the gradient falls below
    double step_tol = 1e-6;   ///< stop when the accepted step's infinity norm falls below
    int max_iters = 400;
    std::optional<std::int64_t> max_fe;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;

    void validate() const;
};

/// Unconstrained quasi-Newton minimization with a finite-difference gradient
/// (2d objective calls per gradient), inverse-Hessian BFGS updates and a
/// Wolfe line search. The report carries the best point evaluated.
OptReport bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const BfgsOptions& options = {});

/// Central-difference gradient used inside bfgs_minimize. `fx` is f(x), used
/// for one-sided fallbacks when a neighbour evaluates to +inf.
Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double fx, double rel_step);

}  // namespace gpdev
