#pragma once

#include "gpdevopt/correlation.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace gpdev {

/// n design points in [0,1]^d with their simulator outputs.
class DesignSet {
public:
    DesignSet() = default;
    /// Validates: n >= 2, matching lengths, coordinates in [0,1], no duplicate rows.
    DesignSet(Eigen::MatrixXd points, Eigen::VectorXd outputs);

    [[nodiscard]] const Eigen::MatrixXd& points() const { return points_; }
    [[nodiscard]] const Eigen::VectorXd& outputs() const { return outputs_; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }
    [[nodiscard]] bool constant_response() const;

private:
    Eigen::MatrixXd points_;
    Eigen::VectorXd outputs_;
};

struct DevianceOptions {
    double p = 2.0;  ///< smoothness exponent applied to every dimension
    double a = 25.0;  ///< condition threshold is e^a
};

/// Value and by-products of one deviance evaluation.
struct DevianceEvaluation {
    double value = 0.0;
    double delta = 0.0;
    double kappa = 1.0;
    double mu_hat = 0.0;
    double sigma2_hat = 0.0;
    bool ill_conditioned = false;
};

/// GLS mean (1'R^-1 1)^-1 1'R^-1 Y.
double mean_estimate(const FactoredCorrelation& factored, const Eigen::VectorXd& y);

/// (Y - mu)'R^-1(Y - mu)/n, clamped at zero.
double variance_estimate(const FactoredCorrelation& factored, const Eigen::VectorXd& y,
                         double mu_hat);

/// Profiled deviance log|R_delta| + n log[(Y-1mu)'R_delta^-1(Y-1mu)] for one design.
///
/// The nugget lower bound is recomputed for every beta. Evaluation is pure and
/// thread-safe; an ill-conditioned or degenerate point evaluates to +inf.
class DevianceFunction {
public:
    /// Throws DegenerateDesign when the response is constant.
    DevianceFunction(DesignSet design, DevianceOptions options = {});

    [[nodiscard]] double operator()(const Eigen::VectorXd& beta) const {
        return evaluate(beta).value;
    }
    [[nodiscard]] DevianceEvaluation evaluate(const Eigen::VectorXd& beta) const;

    /// Regularized factor of R(beta). Throws IllConditioned.
    [[nodiscard]] FactoredCorrelation factor(const Eigen::VectorXd& beta) const;

    [[nodiscard]] const DesignSet& design() const { return design_; }
    [[nodiscard]] const DevianceOptions& options() const { return options_; }
    [[nodiscard]] std::size_t dim() const { return design_.dim(); }
    [[nodiscard]] CorrelationSpec spec(const Eigen::VectorXd& beta) const {
        return CorrelationSpec::uniform(beta, options_.p, options_.a);
    }

private:
    DesignSet design_;
    DevianceOptions options_;
    DistanceCache cache_;
};

/// One-shot evaluation; builds the distance table on every call.
DevianceEvaluation evaluate_deviance(const DesignSet& design, const Eigen::VectorXd& beta,
                                     const DevianceOptions& options = {});

struct Prediction {
    double y_hat = 0.0;
    double mse = 0.0;
};

/// GP emulator conditioned on a design at fixed beta.
class FittedGP {
public:
    /// Factors R(beta) and estimates mu and sigma^2. Throws IllConditioned.
    FittedGP(const DevianceFunction& deviance, const Eigen::VectorXd& beta,
             std::int64_t fe_count = 0);

    [[nodiscard]] const DesignSet& design() const { return design_; }
    [[nodiscard]] const Eigen::VectorXd& beta() const { return beta_; }
    [[nodiscard]] const CorrelationSpec& spec() const { return spec_; }
    [[nodiscard]] double p() const { return spec_.p[0]; }
    [[nodiscard]] double a() const { return spec_.a; }
    [[nodiscard]] double mu_hat() const { return mu_hat_; }
    [[nodiscard]] double sigma2_hat() const { return sigma2_hat_; }
    [[nodiscard]] double deviance() const { return deviance_; }
    [[nodiscard]] std::int64_t fe_count() const { return fe_count_; }
    [[nodiscard]] const FactoredCorrelation& correlation() const { return factored_; }
    [[nodiscard]] double delta() const { return factored_.delta(); }

    /// BLUP mu + r'R^-1(Y - 1mu) and its mean squared error (clamped at zero).
    [[nodiscard]] Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Row-wise predictions; rows are independent and evaluated in parallel.
    [[nodiscard]] std::vector<Prediction> predict_many(const Eigen::MatrixXd& points) const;

    /// Weight vector C with y_hat = C'Y.
    [[nodiscard]] Eigen::VectorXd blup_weights(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    [[nodiscard]] Prediction predict_from(const VectorR& r) const;

    DesignSet design_;
    Eigen::VectorXd beta_;
    CorrelationSpec spec_;
    FactoredCorrelation factored_;
    VectorR residual_weights_;  // R^-1 (Y - 1 mu)
    VectorR rinv_one_;          // R^-1 1
    Real one_rinv_one_ = 0;
    Real mu_ = 0;
    Real sigma2_ = 0;
    double mu_hat_ = 0.0;
    double sigma2_hat_ = 0.0;
    double deviance_ = 0.0;
    std::int64_t fe_count_ = 0;
};

}  // namespace gpdev
