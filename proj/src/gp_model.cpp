#include "gpdevopt/gp_model.hpp"

#include "gpdevopt/errors.hpp"
#include "gpdevopt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gpdev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Estimates {
    Real mu = 0;
    Real quad = 0;
    VectorR rinv_one;
    VectorR residual_weights;
};

Estimates estimate(const FactoredCorrelation& factored, const Eigen::VectorXd& y) {
    if (static_cast<std::size_t>(y.size()) != factored.dim())
        throw InvalidInput("response length does not match correlation matrix");
    Estimates est;
    const VectorR yr = y.cast<Real>();
    est.rinv_one = factored.solve(VectorR::Ones(y.size()));
    est.mu = est.rinv_one.dot(yr) / est.rinv_one.sum();
    const VectorR centered = yr.array() - est.mu;
    est.residual_weights = factored.solve(centered);
    est.quad = centered.dot(est.residual_weights);
    return est;
}

double deviance_value(const FactoredCorrelation& factored, Real quad, std::size_t n) {
    return static_cast<double>(static_cast<Real>(factored.log_det()) +
                               static_cast<Real>(n) * std::log(quad));
}

}  // namespace

DesignSet::DesignSet(Eigen::MatrixXd points, Eigen::VectorXd outputs)
    : points_(std::move(points)), outputs_(std::move(outputs)) {
    if (points_.rows() < 2) throw InvalidInput("a design needs at least two points");
    if (points_.cols() < 1) throw InvalidInput("a design needs at least one input dimension");
    if (outputs_.size() != points_.rows())
        throw InvalidInput("design has " + std::to_string(points_.rows()) + " points but " +
                           std::to_string(outputs_.size()) + " outputs");
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        for (Eigen::Index k = 0; k < points_.cols(); ++k) {
            const double v = points_(i, k);
            if (!(v >= 0.0 && v <= 1.0))
                throw InvalidInput("design coordinate outside [0,1] at row " + std::to_string(i));
        }
        if (!std::isfinite(outputs_[i]))
            throw InvalidInput("non-finite output at row " + std::to_string(i));
    }
    for (Eigen::Index i = 0; i < points_.rows(); ++i)
        for (Eigen::Index j = i + 1; j < points_.rows(); ++j)
            if (points_.row(i) == points_.row(j))
                throw InvalidInput("duplicate design points at rows " + std::to_string(i) +
                                   " and " + std::to_string(j));
}

bool DesignSet::constant_response() const {
    return outputs_.maxCoeff() == outputs_.minCoeff();
}

double mean_estimate(const FactoredCorrelation& factored, const Eigen::VectorXd& y) {
    return static_cast<double>(estimate(factored, y).mu);
}

double variance_estimate(const FactoredCorrelation& factored, const Eigen::VectorXd& y,
                         double mu_hat) {
    if (static_cast<std::size_t>(y.size()) != factored.dim())
        throw InvalidInput("response length does not match correlation matrix");
    const VectorR centered = y.cast<Real>().array() - static_cast<Real>(mu_hat);
    const Real quad = centered.dot(factored.solve(centered));
    return std::max(static_cast<double>(quad / static_cast<Real>(y.size())), 0.0);
}

DevianceFunction::DevianceFunction(DesignSet design, DevianceOptions options)
    : design_(std::move(design)), options_(options) {
    if (design_.size() < 2) throw InvalidInput("deviance needs a validated design");
    if (design_.constant_response())
        throw DegenerateDesign("response is constant; the deviance has no finite minimum");
    CorrelationSpec::uniform(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(design_.dim())),
                             options_.p, options_.a)
        .validate();
    cache_ = DistanceCache(design_.points(),
                           Eigen::VectorXd::Constant(static_cast<Eigen::Index>(design_.dim()),
                                                     options_.p));
}

FactoredCorrelation DevianceFunction::factor(const Eigen::VectorXd& beta) const {
    if (static_cast<std::size_t>(beta.size()) != dim())
        throw InvalidInput("beta has " + std::to_string(beta.size()) + " entries, expected " +
                           std::to_string(dim()));
    for (Eigen::Index k = 0; k < beta.size(); ++k)
        if (!std::isfinite(beta[k])) throw IllConditioned("non-finite beta");
    return factorize_regularized(build_correlation(cache_, beta), options_.a);
}

DevianceEvaluation DevianceFunction::evaluate(const Eigen::VectorXd& beta) const {
    DevianceEvaluation out;
    try {
        const FactoredCorrelation factored = factor(beta);
        const Estimates est = estimate(factored, design_.outputs());
        out.delta = factored.delta();
        out.kappa = factored.kappa();
        out.mu_hat = static_cast<double>(est.mu);
        const std::size_t n = design_.size();
        out.sigma2_hat = std::max(static_cast<double>(est.quad / static_cast<Real>(n)), 0.0);
        if (!(est.quad > 0) || !std::isfinite(est.quad)) {
            out.value = kInf;
            out.ill_conditioned = true;
        } else {
            out.value = deviance_value(factored, est.quad, n);
        }
    } catch (const IllConditioned&) {
        out.value = kInf;
        out.ill_conditioned = true;
    }
    return out;
}

DevianceEvaluation evaluate_deviance(const DesignSet& design, const Eigen::VectorXd& beta,
                                     const DevianceOptions& options) {
    return DevianceFunction(design, options).evaluate(beta);
}

FittedGP::FittedGP(const DevianceFunction& deviance, const Eigen::VectorXd& beta,
                   std::int64_t fe_count)
    : design_(deviance.design()),
      beta_(beta),
      spec_(deviance.spec(beta)),
      factored_(deviance.factor(beta)),
      fe_count_(fe_count) {
    const Estimates est = estimate(factored_, design_.outputs());
    const std::size_t n = design_.size();
    if (!(est.quad > 0)) throw IllConditioned("quadratic form vanished at fitted beta");
    mu_ = est.mu;
    sigma2_ = est.quad / static_cast<Real>(n);
    mu_hat_ = static_cast<double>(mu_);
    sigma2_hat_ = static_cast<double>(sigma2_);
    residual_weights_ = est.residual_weights;
    rinv_one_ = est.rinv_one;
    one_rinv_one_ = rinv_one_.sum();
    deviance_ = deviance_value(factored_, est.quad, n);
}

Prediction FittedGP::predict_from(const VectorR& r) const {
    Prediction out;
    out.y_hat = static_cast<double>(mu_ + r.dot(residual_weights_));
    // 1 - 2C'r + C'RC with C expanded: 1 - r'R^-1 r + (1 - 1'R^-1 r)^2 / 1'R^-1 1
    const VectorR u = factored_.solve(r);
    const Real gap = 1 - rinv_one_.dot(r);
    const Real factor = 1 - r.dot(u) + gap * gap / one_rinv_one_;
    out.mse = std::max(static_cast<double>(sigma2_ * factor), 0.0);
    return out;
}

Prediction FittedGP::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (static_cast<std::size_t>(x.size()) != design_.dim())
        throw InvalidInput("prediction point has wrong dimension");
    return predict_from(correlation_vector(design_.points(), spec_, x));
}

std::vector<Prediction> FittedGP::predict_many(const Eigen::MatrixXd& points) const {
    if (points.rows() > 0 && static_cast<std::size_t>(points.cols()) != design_.dim())
        throw InvalidInput("prediction points have wrong dimension");
    MatrixR cross;
    kernels::cross_correlation_parallel(design_.points(), points, spec_, cross);
    std::vector<Prediction> out(static_cast<std::size_t>(points.rows()));
#pragma omp parallel for schedule(static) if (points.rows() >= 256)
    for (Eigen::Index m = 0; m < points.rows(); ++m)
        out[static_cast<std::size_t>(m)] = predict_from(cross.row(m).transpose());
    return out;
}

Eigen::VectorXd FittedGP::blup_weights(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const VectorR r = correlation_vector(design_.points(), spec_, x);
    const Real gap = 1 - rinv_one_.dot(r);
    const VectorR combo = (gap / one_rinv_one_) * VectorR::Ones(r.size()) + r;
    return factored_.solve(combo).cast<double>();
}

}  // namespace gpdev
