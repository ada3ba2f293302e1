#include "gpdevopt/correlation.hpp"

#include "gpdevopt/errors.hpp"
#include "gpdevopt/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace gpdev {

CorrelationSpec CorrelationSpec::uniform(const Eigen::VectorXd& beta, double exponent, double a) {
    CorrelationSpec spec;
    spec.beta = beta;
    spec.p = Eigen::VectorXd::Constant(beta.size(), exponent);
    spec.a = a;
    return spec;
}

void CorrelationSpec::validate() const {
    if (beta.size() < 1) throw InvalidInput("correlation spec needs at least one dimension");
    if (beta.size() != p.size())
        throw InvalidInput("beta has " + std::to_string(beta.size()) + " entries but p has " +
                           std::to_string(p.size()));
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (!(p[k] > 0.0 && p[k] <= 2.0))
            throw InvalidInput("smoothness exponent p must lie in (0, 2]");
    }
    if (!(a > 0.0)) throw InvalidInput("condition threshold exponent a must be positive");
}

DistanceCache::DistanceCache(const Eigen::MatrixXd& design, const Eigen::VectorXd& p)
    : n_(static_cast<std::size_t>(design.rows())), d_(static_cast<std::size_t>(design.cols())) {
    if (static_cast<std::size_t>(p.size()) != d_)
        throw InvalidInput("design has " + std::to_string(d_) + " columns but p has " +
                           std::to_string(p.size()) + " entries");
    table_.resize(pairs() * d_);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j, ++idx) {
            for (std::size_t k = 0; k < d_; ++k) {
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                const auto kk = static_cast<Eigen::Index>(k);
                table_[idx * d_ + k] = kernels::powered_gap(design(ii, kk), design(jj, kk), p[kk]);
            }
        }
    }
}

MatrixR build_correlation(const Eigen::MatrixXd& design, const CorrelationSpec& spec) {
    spec.validate();
    if (static_cast<std::size_t>(design.cols()) != spec.dim())
        throw InvalidInput("design dimension " + std::to_string(design.cols()) +
                           " does not match correlation spec dimension " +
                           std::to_string(spec.dim()));
    return build_correlation(DistanceCache(design, spec.p), spec.beta);
}

MatrixR build_correlation(const DistanceCache& cache, const Eigen::VectorXd& beta) {
    if (static_cast<std::size_t>(beta.size()) != cache.dim())
        throw InvalidInput("beta length does not match design dimension");
    MatrixR r;
    kernels::correlation_parallel(cache, beta, r);
    return r;
}

VectorR correlation_vector(const Eigen::MatrixXd& design, const CorrelationSpec& spec,
                           const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != design.cols()) throw InvalidInput("point dimension does not match design");
    MatrixR out;
    kernels::cross_correlation_serial(design, x.transpose(), spec, out);
    return out.row(0).transpose();
}

ConditionEstimate condition_number(const MatrixR& r) {
    if (r.rows() != r.cols() || r.rows() == 0)
        throw InvalidInput("condition number needs a non-empty square matrix");
    Eigen::SelfAdjointEigenSolver<MatrixR> eig(r, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw IllConditioned("eigenvalue computation failed");
    const Real lo = eig.eigenvalues().minCoeff();
    const Real hi = eig.eigenvalues().maxCoeff();
    ConditionEstimate out;
    out.lambda_min = static_cast<double>(lo);
    out.lambda_max = static_cast<double>(hi);
    if (hi <= 0 || lo <= static_cast<Real>(ConditionEstimate::kSingularRatio) * hi) {
        out.singular = true;
        out.kappa = ConditionEstimate::kClampedKappa;
    } else {
        out.kappa = static_cast<double>(hi / lo);
    }
    return out;
}

double nugget_lower_bound(const ConditionEstimate& cond, double a) {
    const Real ceiling = std::exp(static_cast<Real>(a));
    const Real kappa = cond.kappa;
    if (kappa <= ceiling) return 0.0;
    const Real bound = cond.lambda_max * (kappa - ceiling) / (kappa * (ceiling - 1));
    return std::max(static_cast<double>(bound), 0.0);
}

double nugget_lower_bound(const MatrixR& r, double a) {
    return nugget_lower_bound(condition_number(r), a);
}

FactoredCorrelation factorize(const MatrixR& r, double delta, double kappa) {
    if (!(delta >= 0.0)) throw InvalidInput("nugget must be nonnegative");
    if (r.rows() != r.cols()) throw InvalidInput("correlation matrix must be square");
    FactoredCorrelation out;
    out.delta_ = delta;
    out.kappa_ = kappa >= 0.0 ? kappa : condition_number(r).kappa;
    out.regularized_ = r;
    out.regularized_.diagonal().array() += static_cast<Real>(delta);
    out.llt_.compute(out.regularized_);
    if (out.llt_.info() != Eigen::Success)
        throw IllConditioned("R + delta*I is not positive definite");
    const auto& lower = out.llt_.matrixLLT();
    Real log_det = 0;
    for (Eigen::Index i = 0; i < lower.rows(); ++i) {
        const Real dii = lower(i, i);
        if (!(dii > 0) || !std::isfinite(dii))
            throw IllConditioned("Cholesky factor has a non-positive pivot");
        log_det += std::log(dii);
    }
    out.log_det_ = static_cast<double>(2 * log_det);
    if (!std::isfinite(out.log_det_)) throw IllConditioned("log-determinant is not finite");
    return out;
}

FactoredCorrelation factorize_regularized(const MatrixR& r, double a) {
    const ConditionEstimate cond = condition_number(r);
    return factorize(r, nugget_lower_bound(cond, a), cond.kappa);
}

}  // namespace gpdev
