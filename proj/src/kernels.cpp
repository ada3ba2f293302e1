#include "gpdevopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpdev::kernels {
namespace {

VectorR length_scales(const Eigen::VectorXd& beta) {
    VectorR theta(beta.size());
    for (Eigen::Index k = 0; k < beta.size(); ++k)
        theta[k] = std::pow(Real{10}, static_cast<Real>(beta[k]));
    return theta;
}

inline Real pair_correlation(const Real* dist, const Real* theta, std::size_t d) {
    Real s = 0;
    for (std::size_t k = 0; k < d; ++k) s += theta[k] * dist[k];
    return std::exp(-s);
}

inline Real point_correlation(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
                              Eigen::Index j, const VectorR& theta, const Eigen::VectorXd& p) {
    Real s = 0;
    for (Eigen::Index k = 0; k < a.cols(); ++k) s += theta[k] * powered_gap(a(i, k), b(j, k), p[k]);
    return std::exp(-s);
}

inline double squared_distance(const Eigen::MatrixXd& pts, Eigen::Index i, Eigen::Index j) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
        const double diff = pts(i, k) - pts(j, k);
        s += diff * diff;
    }
    return s;
}

}  // namespace

void correlation_serial(const DistanceCache& cache, const Eigen::VectorXd& beta,
                        MatrixR& out) {
    const auto n = static_cast<Eigen::Index>(cache.points());
    const std::size_t d = cache.dim();
    const VectorR theta = length_scales(beta);
    const Real* table = cache.table().data();
    out.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = 1;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const std::size_t idx = cache.pair_index(static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j));
            const Real v = pair_correlation(table + idx * d, theta.data(), d);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
}

void correlation_parallel(const DistanceCache& cache, const Eigen::VectorXd& beta,
                          MatrixR& out) {
    const auto n = static_cast<Eigen::Index>(cache.points());
    const std::size_t d = cache.dim();
    const VectorR theta = length_scales(beta);
    const Real* table = cache.table().data();
    out.resize(n, n);
    const bool big = cache.pairs() * d >= kParallelThreshold;
#pragma omp parallel for schedule(dynamic, 8) if (big)
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i, i) = 1;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const std::size_t idx = cache.pair_index(static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j));
            const Real v = pair_correlation(table + idx * d, theta.data(), d);
            out(i, j) = v;
            out(j, i) = v;
        }
    }
}

void cross_correlation_serial(const Eigen::MatrixXd& design, const Eigen::MatrixXd& points,
                              const CorrelationSpec& spec, MatrixR& out) {
    const VectorR theta = length_scales(spec.beta);
    out.resize(points.rows(), design.rows());
    for (Eigen::Index m = 0; m < points.rows(); ++m)
        for (Eigen::Index i = 0; i < design.rows(); ++i)
            out(m, i) = point_correlation(points, m, design, i, theta, spec.p);
}

void cross_correlation_parallel(const Eigen::MatrixXd& design, const Eigen::MatrixXd& points,
                                const CorrelationSpec& spec, MatrixR& out) {
    const VectorR theta = length_scales(spec.beta);
    out.resize(points.rows(), design.rows());
    const auto work = static_cast<std::size_t>(points.rows() * design.rows() * design.cols());
#pragma omp parallel for schedule(static) if (work >= kParallelThreshold)
    for (Eigen::Index m = 0; m < points.rows(); ++m)
        for (Eigen::Index i = 0; i < design.rows(); ++i)
            out(m, i) = point_correlation(points, m, design, i, theta, spec.p);
}

double min_pairwise_distance_serial(const Eigen::MatrixXd& points) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index j = i + 1; j < points.rows(); ++j)
            best = std::min(best, squared_distance(points, i, j));
    return std::sqrt(best);
}

double min_pairwise_distance_parallel(const Eigen::MatrixXd& points) {
    double best = std::numeric_limits<double>::infinity();
    const auto n = points.rows();
    const auto work = static_cast<std::size_t>(n * n / 2 * points.cols());
    // min is order independent, so the reduction is exact
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best) if (work >= kParallelThreshold)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            best = std::min(best, squared_distance(points, i, j));
    return std::sqrt(best);
}

}  // namespace gpdev::kernels
