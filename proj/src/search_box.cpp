#include "gpdevopt/search_box.hpp"

#include "gpdevopt/errors.hpp"

#include <cmath>

namespace gpdev {

SearchBox::SearchBox(Eigen::VectorXd lower, Eigen::VectorXd upper, double scale)
    : scale_(scale) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw InvalidInput("search box bounds must be non-empty and of equal length");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw InvalidInput("search box scale must be positive");
    const Eigen::VectorXd mid = 0.5 * (lower + upper);
    const Eigen::VectorXd half = 0.5 * scale * (upper - lower);
    lower_ = mid - half;
    upper_ = mid + half;
    for (Eigen::Index k = 0; k < lower_.size(); ++k)
        if (!(lower_[k] < upper_[k]) || !std::isfinite(lower_[k]) || !std::isfinite(upper_[k]))
            throw InvalidInput("search box needs lower < upper in every dimension");
}

SearchBox SearchBox::scaled(double factor) const {
    SearchBox out(lower_, upper_, factor);
    out.scale_ = scale_ * factor;
    return out;
}

bool SearchBox::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) const {
    if (x.size() != lower_.size()) return false;
    for (Eigen::Index k = 0; k < x.size(); ++k)
        if (x[k] < lower_[k] - tol || x[k] > upper_[k] + tol) return false;
    return true;
}

Eigen::VectorXd SearchBox::clamp(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return x.cwiseMax(lower_).cwiseMin(upper_);
}

Eigen::VectorXd SearchBox::from_unit(const Eigen::Ref<const Eigen::VectorXd>& u) const {
    return lower_ + u.cwiseProduct(upper_ - lower_);
}

Eigen::VectorXd SearchBox::to_unit(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return (x - lower_).cwiseQuotient(upper_ - lower_);
}

SearchBox default_beta_box(std::size_t d, double scale) {
    if (d < 1) throw InvalidInput("dimension must be at least 1");
    const double ld = std::log10(static_cast<double>(d));
    const auto n = static_cast<Eigen::Index>(d);
    return SearchBox(Eigen::VectorXd::Constant(n, -2.0 - ld),
                     Eigen::VectorXd::Constant(n, std::log10(500.0) - ld), scale);
}

SearchBox if_beta_box(std::size_t d, double scale) {
    if (d < 1) throw InvalidInput("dimension must be at least 1");
    const double dd = static_cast<double>(d);
    const auto n = static_cast<Eigen::Index>(d);
    return SearchBox(Eigen::VectorXd::Constant(n, dd * (-2.0 - std::log10(dd))),
                     Eigen::VectorXd::Constant(n, std::log10(500.0)), scale);
}

}  // namespace gpdev
