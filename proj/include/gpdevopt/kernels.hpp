#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference that
// the OpenMP version must reproduce bit for bit; tests compare the two and
// bench/bench_kernels.cpp times them.

#include "gpdevopt/correlation.hpp"

#include <Eigen/Core>

#include <cmath>

namespace gpdev::kernels {

/// |a - b|^p in extended precision, with the common p = 2 case kept exact.
inline Real powered_gap(double a, double b, double p) {
    const Real diff = static_cast<Real>(a) - static_cast<Real>(b);
    const Real m = diff < 0 ? -diff : diff;
    return p == 2.0 ? m * m : std::pow(m, static_cast<Real>(p));
}

/// Work size (pairs x dim) below which the parallel kernels stay serial.
inline constexpr std::size_t kParallelThreshold = 1 << 15;

void correlation_serial(const DistanceCache& cache, const Eigen::VectorXd& beta,
                        MatrixR& out);
void correlation_parallel(const DistanceCache& cache, const Eigen::VectorXd& beta,
                          MatrixR& out);

/// out(m, i) = corr(points.row(m), design.row(i)); m x n.
void cross_correlation_serial(const Eigen::MatrixXd& design, const Eigen::MatrixXd& points,
                              const CorrelationSpec& spec, MatrixR& out);
void cross_correlation_parallel(const Eigen::MatrixXd& design, const Eigen::MatrixXd& points,
                                const CorrelationSpec& spec, MatrixR& out);

/// Smallest Euclidean distance between two rows (maximin score).
double min_pairwise_distance_serial(const Eigen::MatrixXd& points);
double min_pairwise_distance_parallel(const Eigen::MatrixXd& points);

}  // namespace gpdev::kernels
