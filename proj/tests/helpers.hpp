#pragma once

#include "oracle.hpp"

#include "gpdevopt/fit.hpp"
#include "gpdevopt/gp_model.hpp"
#include "gpdevopt/lhd.hpp"
#include "gpdevopt/search_box.hpp"

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <random>

namespace support {

inline oracle::Mat to_oracle(const Eigen::MatrixXd& m) {
    oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

inline oracle::Vec to_oracle(const Eigen::VectorXd& v) {
    return oracle::Vec(v.data(), v.data() + v.size());
}

template <class Derived>
oracle::Mat to_oracle_matrix(const Eigen::MatrixBase<Derived>& m) {
    oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

/// |a - b| <= tol * max(|a|, |b|, floor).
inline bool rel_close(double a, double b, double tol, double floor = 0.0) {
    return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), floor});
}

/// Random design with n in [2, n_max], d in [1, d_max], uniform points and
/// outputs, and beta drawn uniformly from the default search box.
struct RandomCase {
    gpdev::DesignSet design;
    Eigen::VectorXd beta;
};

inline RandomCase random_case(gpdev::Rng& rng, std::size_t n_max = 8, std::size_t d_max = 3) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(2 + rng() % (n_max - 1));
    const auto d = static_cast<Eigen::Index>(1 + rng() % d_max);
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < d; ++k) x(i, k) = unit(rng);
        y[i] = 4.0 * unit(rng) - 2.0;
    }
    const gpdev::SearchBox box = gpdev::default_beta_box(static_cast<std::size_t>(d));
    Eigen::VectorXd u(d);
    for (Eigen::Index k = 0; k < d; ++k) u[k] = unit(rng);
    return {gpdev::DesignSet(x, y), box.from_unit(u)};
}

inline oracle::Model oracle_model(const gpdev::DesignSet& design, const Eigen::VectorXd& beta,
                                  double p = 2.0) {
    return oracle::build(to_oracle(design.points()), to_oracle(design.outputs()), to_oracle(beta),
                         oracle::Vec(static_cast<std::size_t>(beta.size()), p));
}

/// Running tally of injected FE audits, so a suite can report how many fits
/// it cross-checked.
struct FeAudit {
    std::int64_t fits = 0;
    std::int64_t mismatches = 0;
};

inline FeAudit& fe_audit() {
    static FeAudit audit;
    return audit;
}

/// fit_detailed() with an independent counting wrapper injected through the
/// observer hook; checks that the wrapper saw exactly fe_count evaluations.
inline gpdev::FitResult audited_fit(const gpdev::DesignSet& design, gpdev::StrategyId strategy,
                                    gpdev::FitOptions options = {}) {
    auto counter = std::make_shared<std::atomic<std::int64_t>>(0);
    auto inner = options.observer;
    options.observer = [counter, inner](const Eigen::VectorXd& beta, double v) {
        counter->fetch_add(1);
        if (inner) inner(beta, v);
    };
    gpdev::FitResult result = gpdev::fit_detailed(design, strategy, options);
    ++fe_audit().fits;
    if (counter->load() != result.model.fe_count()) ++fe_audit().mismatches;
    CHECK(counter->load() == result.model.fe_count());
    CHECK(result.report.overall.fe_used == result.model.fe_count());
    return result;
}

/// Wraps an objective with a call counter.
struct Counted {
    gpdev::Objective fn;
    std::shared_ptr<std::atomic<std::int64_t>> calls = std::make_shared<std::atomic<std::int64_t>>(0);
    gpdev::Objective objective() const {
        return [f = fn, c = calls](const Eigen::VectorXd& x) {
            c->fetch_add(1);
            return f(x);
        };
    }
    std::int64_t count() const { return calls->load(); }
};

/// Dense grid minimum of a 1-D objective over [lo, hi].
inline std::pair<double, double> grid_minimum(const gpdev::Objective& f, double lo, double hi,
                                              int nodes) {
    double best_x = lo;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nodes; ++i) {
        Eigen::VectorXd b(1);
        b[0] = lo + (hi - lo) * i / (nodes - 1);
        const double v = f(b);
        if (v < best) {
            best = v;
            best_x = b[0];
        }
    }
    return {best_x, best};
}

}  // namespace support
