#include "gpdevopt/implicit_filtering.hpp"

#include "gpdevopt/errors.hpp"

#include <Eigen/QR>

#include <cmath>

namespace gpdev {

std::vector<double> IfOptions::effective_scales() const {
    if (!scales.empty()) return scales;
    std::vector<double> out;
    for (int m = 1; m <= 7; ++m) out.push_back(std::ldexp(1.0, -m));
    return out;
}

void IfOptions::validate() const {
    if (box.dim() == 0) throw InvalidInput("implicit filtering needs a search box");
    const auto s = effective_scales();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0.0 && s[i] < 1.0)) throw InvalidInput("IF scales must lie in (0,1)");
        if (i > 0 && !(s[i] < s[i - 1])) throw InvalidInput("IF scales must strictly decrease");
    }
    if (max_backtracks < 0) throw InvalidInput("max_backtracks must be nonnegative");
    if (max_phases_per_scale < 1) throw InvalidInput("max_phases_per_scale must be positive");
}

ImplicitFilter::ImplicitFilter(const Objective& objective, const Eigen::VectorXd& x0,
                               IfOptions options)
    : objective_(&objective),
      options_(std::move(options)),
      log_(objective, std::nullopt) {
    options_.validate();
    scales_ = options_.effective_scales();
    if (static_cast<std::size_t>(x0.size()) != options_.box.dim())
        throw InvalidInput("IF start point dimension does not match its box");
    x_ = options_.box.clamp(x0);
    if (!options_.box.contains(x0)) warnings_.emplace_back("IF start point outside box; clamped");
    const auto d = x0.size();
    h_inv_ = Eigen::MatrixXd::Identity(d, d);
}

void ImplicitFilter::next_scale() {
    ++scale_index_;
    phases_at_scale_ = 0;
    samples_.clear();
    samples_.push_back({x_, fx_});
    h_inv_.setIdentity();
    h_scaled_ = false;
    prev_x_.reset();
    prev_g_.reset();
}

std::optional<Eigen::VectorXd> ImplicitFilter::model_gradient() const {
    const auto d = x_.size();
    std::vector<const Sample*> usable;
    for (const auto& s : samples_)
        if (std::isfinite(s.f)) usable.push_back(&s);
    if (usable.size() < static_cast<std::size_t>(d) + 1) return std::nullopt;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(usable.size()), d + 1);
    Eigen::VectorXd b(static_cast<Eigen::Index>(usable.size()));
    for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        a(row, 0) = 1.0;
        a.row(row).tail(d) = (usable[i]->x - x_).transpose();
        b[row] = usable[i]->f;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < d + 1) return std::nullopt;
    const Eigen::VectorXd coef = qr.solve(b);
    Eigen::VectorXd g = coef.tail(d);
    if (!g.allFinite() || g.isZero(0.0)) return std::nullopt;
    return g;
}

void ImplicitFilter::phase() {
    const double h = scales_[scale_index_];
    const Eigen::VectorXd range = options_.box.range();
    const auto d = x_.size();

    Eigen::VectorXd best_x = x_;
    double best_f = fx_;
    Eigen::VectorXd probe = x_;
    for (Eigen::Index j = 0; j < d; ++j) {
        for (const double sign : {1.0, -1.0}) {
            probe = x_;
            probe[j] += sign * h * range[j];
            probe = options_.box.clamp(probe);
            const double v = log_(probe);
            samples_.push_back({probe, v});
            if (v < best_f) {
                best_f = v;
                best_x = probe;
            }
        }
    }
    const bool stencil_failed = !(best_f < fx_);

    // quasi-Newton step on the least-squares affine model about the incumbent
    if (auto g = model_gradient()) {
        if (prev_x_ && prev_g_) {
            const Eigen::VectorXd s = x_ - *prev_x_;
            const Eigen::VectorXd y = *g - *prev_g_;
            const double sy = s.dot(y);
            if (sy > 1e-12 * s.norm() * y.norm()) {
                if (!h_scaled_) {
                    h_inv_ = Eigen::MatrixXd::Identity(d, d) * (sy / y.squaredNorm());
                    h_scaled_ = true;
                }
                const double rho = 1.0 / sy;
                const Eigen::MatrixXd left =
                    Eigen::MatrixXd::Identity(d, d) - rho * s * y.transpose();
                h_inv_ = left * h_inv_ * left.transpose() + rho * s * s.transpose();
            }
        }
        prev_x_ = x_;
        prev_g_ = *g;

        Eigen::VectorXd dir = -h_inv_ * *g;
        if (!(dir.dot(*g) < 0.0)) {
            h_inv_.setIdentity();
            h_scaled_ = false;
            dir = -*g;
        }
        if (!h_scaled_) {
            // unscaled model: first step as long as the current stencil arm
            dir *= h * range.mean() / dir.norm();
        }
        double lambda = 1.0;
        for (int bt = 0; bt <= options_.max_backtracks; ++bt, lambda *= 0.5) {
            const Eigen::VectorXd trial = options_.box.clamp(x_ + lambda * dir);
            if ((trial - x_).isZero(0.0)) break;
            const double v = log_(trial);
            samples_.push_back({trial, v});
            if (v < best_f) {
                best_f = v;
                best_x = trial;
                break;
            }
        }
    }

    if (best_f < fx_) {
        x_ = best_x;
        fx_ = best_f;
    }
    ++phases_at_scale_;
    if (stencil_failed || phases_at_scale_ >= options_.max_phases_per_scale) next_scale();
}

void ImplicitFilter::run(std::optional<std::int64_t> total_cap) {
    log_.set_budget(total_cap ? total_cap : options_.max_fe);
    try {
        if (!started_) {
            fx_ = log_(x_);
            started_ = true;
            samples_.push_back({x_, fx_});
        }
        while (!finished()) phase();
    } catch (const BudgetExhausted&) {
    }
}

OptReport ImplicitFilter::report() const {
    OptReport out = log_.report();
    out.warnings = warnings_;
    return out;
}

OptReport implicit_filtering(const Objective& objective, const Eigen::VectorXd& x0,
                             const IfOptions& options) {
    ImplicitFilter filter(objective, x0, options);
    filter.run();
    return filter.report();
}

}  // namespace gpdev
