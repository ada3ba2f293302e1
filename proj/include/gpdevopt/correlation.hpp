#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace gpdev {

/// Working precision of the correlation and factorization path. Near the
/// condition ceiling e^25 double rounding in R alone moves the deviance in
/// its seventh digit, so R, its eigenvalues and its Cholesky factor are kept
/// in extended precision.
using Real = long double;
using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Gaussian (power-exponential) correlation parameters.
///
/// beta holds log10 inverse length-scales, p the smoothness exponents and
/// `a` the log of the condition-number ceiling used by the nugget bound.
struct CorrelationSpec {
    Eigen::VectorXd beta;
    Eigen::VectorXd p;
    double a = 25.0;

    /// Spec with every exponent equal to `exponent`.
    static CorrelationSpec uniform(const Eigen::VectorXd& beta, double exponent = 2.0,
                                   double a = 25.0);

    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(beta.size()); }

    /// Throws InvalidInput unless lengths agree, p in (0,2] and a > 0.
    void validate() const;
};

/// Pairwise |x_ik - x_jk|^p_k for i < j, stored once per design so that each
/// deviance evaluation only pays for the exponentials.
class DistanceCache {
public:
    DistanceCache() = default;
    DistanceCache(const Eigen::MatrixXd& design, const Eigen::VectorXd& p);

    [[nodiscard]] std::size_t points() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return d_; }
    [[nodiscard]] std::size_t pairs() const { return n_ * (n_ - 1) / 2; }

    /// Row-major pairs() x dim() table; pair (i,j), i<j, lives at pair_index(i,j).
    [[nodiscard]] const std::vector<Real>& table() const { return table_; }

    [[nodiscard]] std::size_t pair_index(std::size_t i, std::size_t j) const {
        // upper triangle, row by row
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

private:
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::vector<Real> table_;
};

/// R_ij = prod_k exp(-10^beta_k |x_ik - x_jk|^p_k); unit diagonal, symmetric.
MatrixR build_correlation(const Eigen::MatrixXd& design, const CorrelationSpec& spec);

/// Same matrix from a precomputed distance table.
MatrixR build_correlation(const DistanceCache& cache, const Eigen::VectorXd& beta);

/// Correlation vector between one point and every design row.
VectorR correlation_vector(const Eigen::MatrixXd& design, const CorrelationSpec& spec,
                           const Eigen::Ref<const Eigen::VectorXd>& x);

/// Extreme eigenvalues and 2-norm condition number of a symmetric matrix.
struct ConditionEstimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa = 1.0;
    /// lambda_min <= kSingularRatio * lambda_max; kappa then holds kClampedKappa.
    bool singular = false;

    static constexpr double kSingularRatio = 1e-14;
    static constexpr double kClampedKappa = 1e14;
};

ConditionEstimate condition_number(const MatrixR& r);

/// Smallest nugget keeping kappa(R + delta I) <= e^a; zero when R already is.
double nugget_lower_bound(const MatrixR& r, double a);
double nugget_lower_bound(const ConditionEstimate& cond, double a);

/// Cholesky factor of R + delta*I with its log-determinant.
class FactoredCorrelation {
public:
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(llt_.rows()); }
    [[nodiscard]] double delta() const { return delta_; }
    [[nodiscard]] double log_det() const { return log_det_; }
    /// Condition number of R before the nugget was added.
    [[nodiscard]] double kappa() const { return kappa_; }
    /// R + delta*I as factored.
    [[nodiscard]] const MatrixR& matrix() const { return regularized_; }
    [[nodiscard]] MatrixR lower() const { return llt_.matrixL(); }

    [[nodiscard]] VectorR solve(const VectorR& rhs) const { return llt_.solve(rhs); }

    friend FactoredCorrelation factorize(const MatrixR& r, double delta, double kappa);

private:
    MatrixR regularized_;
    Eigen::LLT<MatrixR> llt_;
    double delta_ = 0.0;
    double log_det_ = 0.0;
    double kappa_ = 1.0;
};

/// Factors R + delta*I. Throws IllConditioned if it is not numerically SPD.
/// `kappa` is recorded as diagnostic only; pass a negative value to compute it.
FactoredCorrelation factorize(const MatrixR& r, double delta, double kappa = -1.0);

/// Applies the nugget lower bound for threshold e^a and factors the result.
FactoredCorrelation factorize_regularized(const MatrixR& r, double a);

}  // namespace gpdev
