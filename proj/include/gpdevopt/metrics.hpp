#pragma once

#include <Eigen/Core>

#include <span>

namespace gpdev {

/// sqrt(sum (y - y_hat)^2 / sum y^2). Throws InvalidInput on length mismatch
/// or an all-zero reference.
double rmspe(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

/// Sample standard deviation over sqrt(count); needs at least two values.
double rmspe_std_err(std::span<const double> values);

/// 100 (v - best) / |best|; zero when v == best.
double percent_delta(double value, double best);

}  // namespace gpdev
