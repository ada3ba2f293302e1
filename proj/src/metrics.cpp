#include "gpdevopt/metrics.hpp"

#include "gpdevopt/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace gpdev {

double rmspe(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
    if (y_true.size() != y_pred.size()) throw InvalidInput("RMSPE inputs differ in length");
    const double denom = y_true.squaredNorm();
    if (!(denom > 0.0)) throw InvalidInput("RMSPE is undefined for an all-zero reference");
    return std::sqrt((y_true - y_pred).squaredNorm() / denom);
}

double rmspe_std_err(std::span<const double> values) {
    if (values.size() < 2) throw InvalidInput("standard error needs at least two values");
    const auto n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

double percent_delta(double value, double best) {
    if (value == best) return 0.0;
    if (best == 0.0) return value > 0.0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
    return 100.0 * (value - best) / std::abs(best);
}

}  // namespace gpdev
