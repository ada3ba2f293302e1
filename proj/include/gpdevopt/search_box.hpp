#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace gpdev {

/// Per-dimension bounds on beta, optionally expanded or contracted about
/// their centre by `scale`.
class SearchBox {
public:
    SearchBox() = default;
    /// Throws InvalidInput unless lower < upper everywhere and scale > 0.
    SearchBox(Eigen::VectorXd lower, Eigen::VectorXd upper, double scale = 1.0);

    [[nodiscard]] const Eigen::VectorXd& lower() const { return lower_; }
    [[nodiscard]] const Eigen::VectorXd& upper() const { return upper_; }
    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(lower_.size()); }
    [[nodiscard]] Eigen::VectorXd range() const { return upper_ - lower_; }
    [[nodiscard]] Eigen::VectorXd center() const { return 0.5 * (lower_ + upper_); }

    /// Same centre, widths multiplied by `factor` (applied on top of scale()).
    [[nodiscard]] SearchBox scaled(double factor) const;

    [[nodiscard]] bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 0.0) const;
    [[nodiscard]] Eigen::VectorXd clamp(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    /// Maps u in [0,1]^d to lower + u * range.
    [[nodiscard]] Eigen::VectorXd from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const;
    [[nodiscard]] Eigen::VectorXd to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    Eigen::VectorXd lower_;
    Eigen::VectorXd upper_;
    double scale_ = 1.0;
};

/// Start-point region: -2 - log10(d) <= beta_k <= log10(500) - log10(d).
SearchBox default_beta_box(std::size_t d, double scale = 1.0);

/// Implicit Filtering bounds: d(-2 - log10(d)) <= beta_k <= log10(500).
SearchBox if_beta_box(std::size_t d, double scale = 1.0);

}  // namespace gpdev
