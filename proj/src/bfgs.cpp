#include "gpdevopt/bfgs.hpp"

#include "gpdevopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpdev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimizer of the cubic through (a, fa, da) and (b, fb, db); NaN if none.
double cubic_min(double a, double fa, double da, double b, double fb, double db) {
    const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - da * db;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return b - (b - a) * (db + d2 - d1) / denom;
}

// Minimizer of the quadratic matching (a, fa, da) and (b, fb).
double quadratic_min(double a, double fa, double da, double b, double fb) {
    const double h = b - a;
    const double curv = fb - fa - da * h;
    if (curv <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return a - da * h * h / (2.0 * curv);
}

struct LinePoint {
    double alpha = 0.0;
    double f = kInf;
    double slope = 0.0;
    bool has_slope = false;
    Eigen::VectorXd grad;
};

// Picks the next trial inside the bracket, kept away from both ends.
double interpolate(const LinePoint& lo, const LinePoint& hi) {
    double t = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(hi.f)) {
        if (hi.has_slope) t = cubic_min(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f, hi.slope);
        if (!std::isfinite(t)) t = quadratic_min(lo.alpha, lo.f, lo.slope, hi.alpha, hi.f);
    }
    const double a = std::min(lo.alpha, hi.alpha);
    const double b = std::max(lo.alpha, hi.alpha);
    const double margin = 0.1 * (b - a);
    if (!std::isfinite(t)) return std::isfinite(hi.f) ? 0.5 * (a + b) : lo.alpha + 0.25 * (hi.alpha - lo.alpha);
    return std::clamp(t, a + margin, b - margin);
}

}  // namespace

void BfgsOptions::validate() const {
    if (!(grad_step > 0.0 && grad_step <= 1e-2))
        throw InvalidInput("BFGS finite-difference step must lie in (0, 1e-2]");
    if (!(grad_tol > 0.0)) throw InvalidInput("BFGS gradient tolerance must be positive");
    if (max_iters < 1) throw InvalidInput("BFGS needs at least one iteration");
    if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
        throw InvalidInput("Wolfe constants must satisfy 0 < c1 < c2 < 1");
}

Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double fx, double rel_step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = rel_step * std::max(1.0, std::abs(x[k]));
        probe[k] = x[k] + h;
        const double fp = f(probe);
        probe[k] = x[k] - h;
        const double fm = f(probe);
        probe[k] = x[k];
        if (std::isfinite(fp) && std::isfinite(fm)) {
            g[k] = (fp - fm) / (2.0 * h);
        } else if (std::isfinite(fp) && std::isfinite(fx)) {
            g[k] = (fp - fx) / h;
        } else if (std::isfinite(fm) && std::isfinite(fx)) {
            g[k] = (fx - fm) / h;
        } else {
            g[k] = 0.0;
        }
    }
    return g;
}

OptReport bfgs_minimize(const Objective& objective, const Eigen::VectorXd& x0,
                        const BfgsOptions& options) {
    options.validate();
    EvaluationLog log(objective, options.max_fe);
    auto f = [&log](const Eigen::VectorXd& x) { return log(x); };
    const auto d = x0.size();

    try {
        Eigen::VectorXd x = x0;
        double fx = f(x);
        if (!std::isfinite(fx)) return log.report();
        Eigen::VectorXd g = central_gradient(f, x, fx, options.grad_step);
        Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(d, d);
        bool scaled = false;

        for (int iter = 0; iter < options.max_iters; ++iter) {
            if (g.lpNorm<Eigen::Infinity>() < options.grad_tol) break;

            Eigen::VectorXd dir = -h_inv * g;
            double slope0 = g.dot(dir);
            if (!(slope0 < 0.0)) {
                h_inv.setIdentity();
                scaled = false;
                dir = -g;
                slope0 = g.dot(dir);
            }

            // first step of each restart is capped at unit length in beta
            double alpha = scaled ? 1.0 : std::min(1.0, 1.0 / dir.lpNorm<Eigen::Infinity>());

            LinePoint lo{0.0, fx, slope0, true, g};
            LinePoint hi{kInf, kInf, 0.0, false, {}};
            LinePoint accepted;
            bool found = false;
            for (int trial = 0; trial < 40; ++trial) {
                const Eigen::VectorXd xt = x + alpha * dir;
                const double ft = f(xt);
                if (!std::isfinite(ft) || ft > fx + options.wolfe_c1 * alpha * slope0 ||
                    (lo.alpha > 0.0 && ft >= lo.f)) {
                    hi = LinePoint{alpha, ft, 0.0, false, {}};
                    alpha = interpolate(lo, hi);
                    continue;
                }
                Eigen::VectorXd gt = central_gradient(f, xt, ft, options.grad_step);
                const double st = gt.dot(dir);
                LinePoint cur{alpha, ft, st, true, gt};
                if (std::abs(st) <= -options.wolfe_c2 * slope0) {
                    accepted = std::move(cur);
                    found = true;
                    break;
                }
                if (st >= 0.0) {
                    hi = lo;
                    lo = std::move(cur);
                } else {
                    lo = std::move(cur);
                }
                alpha = std::isfinite(hi.alpha) ? interpolate(lo, hi) : 2.0 * lo.alpha;
                if (std::isfinite(hi.alpha) && std::abs(hi.alpha - lo.alpha) * dir.lpNorm<Eigen::Infinity>() <
                                                   1e-12) {
                    break;
                }
            }
            if (!found) {
                if (lo.alpha > 0.0) {
                    accepted = lo;
                } else {
                    break;  // no decrease along the direction
                }
            }

            const Eigen::VectorXd s = accepted.alpha * dir;
            const Eigen::VectorXd y = accepted.grad - g;
            x += s;
            fx = accepted.f;
            g = accepted.grad;

            const double sy = s.dot(y);
            if (sy > 1e-12 * s.norm() * y.norm()) {
                if (!scaled) {
                    h_inv *= sy / y.squaredNorm();
                    scaled = true;
                }
                const double rho = 1.0 / sy;
                const Eigen::MatrixXd left =
                    Eigen::MatrixXd::Identity(d, d) - rho * s * y.transpose();
                h_inv = left * h_inv * left.transpose() + rho * s * s.transpose();
            }

            if (s.lpNorm<Eigen::Infinity>() < options.step_tol) break;
        }
    } catch (const BudgetExhausted&) {
    }
    return log.report();
}

}  // namespace gpdev
