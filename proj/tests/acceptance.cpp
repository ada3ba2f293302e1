// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "oracle.hpp"

#include "gpdevopt/benchmark.hpp"
#include "gpdevopt/bfgs.hpp"
#include "gpdevopt/direct.hpp"
#include "gpdevopt/fit.hpp"
#include "gpdevopt/gp_model.hpp"
#include "gpdevopt/implicit_filtering.hpp"
#include "gpdevopt/lhd.hpp"
#include "gpdevopt/search_box.hpp"
#include "gpdevopt/test_functions.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <utility>

using namespace gpdev;

namespace {

// Tolerances and limits.
constexpr double kOracleTol = 1e-8;
constexpr double kOracleSeconds = 10.0;
constexpr double kInterpYTol = 1e-6;
constexpr double kInterpMseTol = 1e-8;
constexpr double kInvarianceTol = 1e-9;
constexpr double kKappaSlack = 1.05;
constexpr double kNuggetSeconds = 30.0;
constexpr double kHumpRmspeSpread = 0.01;
constexpr double kFeRatioLow = 0.5;
constexpr double kFeRatioHigh = 0.9;
constexpr double kDevianceGapPct = 1.0;
constexpr double kTableSeconds = 600.0;
constexpr double kStdErrFraction = 0.1;
constexpr double kSchwefelFeFraction = 0.5;
constexpr double kSchwefelSeconds = 1800.0;
constexpr double kRosenbrockTol = 1e-6;
constexpr double kDirectTol = 0.01;
constexpr double kIfGridTol = 1e-2;
constexpr double kGradientTol = 1e-4;

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel_err(double a, double b, double floor) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
}

// Independent FE ledger shared by every fit in the run.
struct FeLedger {
    std::atomic<std::int64_t> fits{0};
    std::atomic<std::int64_t> mismatches{0};
};

FeLedger& ledger() {
    static FeLedger l;
    return l;
}

FitResult audited_fit(const DesignSet& design, StrategyId strategy, FitOptions options = {}) {
    auto counter = std::make_shared<std::atomic<std::int64_t>>(0);
    options.observer = [counter](const Eigen::VectorXd&, double) { counter->fetch_add(1); };
    FitResult result = fit_detailed(design, strategy, options);
    ++ledger().fits;
    if (counter->load() != result.model.fe_count() || result.report.overall.fe_used != counter->load())
        ++ledger().mismatches;
    return result;
}

BenchmarkRun audited_benchmark(const std::string& name, std::size_t replicates) {
    std::mutex mu;
    std::map<std::pair<std::size_t, StrategyId>, std::int64_t> counts;
    BenchmarkConfig cfg;
    cfg.replicates = replicates;
    cfg.observer = [&](std::size_t r, StrategyId id, const Eigen::VectorXd&, double) {
        const std::lock_guard lock(mu);
        ++counts[{r, id}];
    };
    BenchmarkRun run = run_benchmark(test_function(name), cfg);
    for (const auto& rec : run.records) {
        if (!rec.fitted) continue;
        ++ledger().fits;
        if (counts[{rec.replicate, rec.strategy}] != rec.fe) ++ledger().mismatches;
    }
    return run;
}

const BenchmarkResult& row_of(const BenchmarkRun& run, StrategyId id) {
    for (const auto& row : run.rows)
        if (row.strategy == id) return row;
    throw std::runtime_error("strategy missing from benchmark");
}

oracle::Mat to_oracle(const Eigen::MatrixXd& m) {
    oracle::Mat out(static_cast<std::size_t>(m.rows()), oracle::Vec(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

oracle::Vec to_oracle(const Eigen::VectorXd& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

Eigen::VectorXd uniform_vector(Eigen::Index n, Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
}

Eigen::VectorXd smooth_response(const Eigen::MatrixXd& x) {
    Eigen::VectorXd y(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < x.cols(); ++k) s += std::sin(3.0 * x(i, k) + static_cast<double>(k)) + x(i, k) * x(i, k);
        y[i] = s;
    }
    return y;
}

Verdict oracle_equivalence() {
    const auto t0 = Clock::now();
    Rng rng(101);
    double worst_l = 0, worst_mu = 0, worst_s2 = 0, worst_res = 0, worst_wf = 0, worst_mse = 0;
    for (int c = 0; c < 100; ++c) {
        const auto n = static_cast<Eigen::Index>(2 + rng() % 7);
        const auto d = static_cast<Eigen::Index>(1 + rng() % 3);
        const double p = (c % 2 == 0) ? 2.0 : 1.99;
        const Eigen::MatrixXd x = uniform_matrix(n, d, rng);
        const Eigen::VectorXd y = uniform_vector(n, rng, -2.0, 2.0);
        const Eigen::VectorXd beta = default_beta_box(static_cast<std::size_t>(d)).from_unit(uniform_vector(d, rng, 0.0, 1.0));
        const DesignSet design(x, y);
        const DevianceFunction dev(design, DevianceOptions{p});
        const DevianceEvaluation ev = dev.evaluate(beta);
        const FittedGP gp(dev, beta);
        const oracle::Model m = oracle::build(to_oracle(x), to_oracle(y), to_oracle(beta),
                                              oracle::Vec(static_cast<std::size_t>(d), p));
        const double ymax = y.cwiseAbs().maxCoeff();
        worst_l = std::max(worst_l, rel_err(ev.value, static_cast<double>(m.deviance), 1.0));
        worst_mu = std::max(worst_mu, rel_err(ev.mu_hat, static_cast<double>(m.mu), ymax));
        worst_s2 = std::max(worst_s2, rel_err(ev.sigma2_hat, static_cast<double>(m.sigma2), 0.0));
        for (int k = 0; k < 3; ++k) {
            const Eigen::VectorXd xs = uniform_vector(d, rng, 0.0, 1.0);
            const Prediction pr = gp.predict(xs);
            const double weight_form = gp.blup_weights(xs).dot(y);
            const auto ref = oracle::predict(m, to_oracle(xs));
            worst_res = std::max(worst_res, rel_err(pr.y_hat, static_cast<double>(ref.blup_residual_form), ymax));
            worst_wf = std::max(worst_wf, rel_err(weight_form, static_cast<double>(ref.blup_weight_form), ymax));
            worst_mse = std::max(worst_mse, rel_err(pr.mse, std::max(static_cast<double>(ref.mse), 0.0), gp.sigma2_hat()));
        }
    }
    const double secs = seconds_since(t0);
    const double worst = std::max({worst_l, worst_mu, worst_s2, worst_res, worst_wf, worst_mse});
    return {worst <= kOracleTol && secs < kOracleSeconds,
            fmt("max rel err L %.1e, mu %.1e, sigma2 %.1e, BLUP %.1e/%.1e, mse %.1e; %.2f s", worst_l, worst_mu,
                worst_s2, worst_res, worst_wf, worst_mse, secs)};
}

Verdict interpolation() {
    Rng rng(202);
    int designs = 0;
    int attempts = 0;
    double worst_y = 0, worst_mse = 0;
    while (designs < 25 && attempts < 1000) {
        ++attempts;
        const std::size_t d = 1 + static_cast<std::size_t>(attempts % 3);
        const Eigen::MatrixXd x = unit_lhd_maximin(10 * d, d, rng);
        const DesignSet design(x, smooth_response(x));
        const Eigen::VectorXd beta = default_beta_box(d).from_unit(uniform_vector(static_cast<Eigen::Index>(d), rng, 0.0, 1.0));
        const FittedGP gp(DevianceFunction(design), beta);
        if (gp.delta() != 0.0) continue;
        ++designs;
        const double range = design.outputs().maxCoeff() - design.outputs().minCoeff();
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const Prediction p = gp.predict(x.row(i).transpose());
            worst_y = std::max(worst_y, std::fabs(p.y_hat - design.outputs()[i]) / range);
            worst_mse = std::max(worst_mse, p.mse / gp.sigma2_hat());
        }
    }
    return {designs == 25 && worst_y < kInterpYTol && worst_mse < kInterpMseTol,
            fmt("%d designs; max |y_hat - y|/range %.1e, max mse/sigma2 %.1e", designs, worst_y, worst_mse)};
}

Verdict invariance() {
    Rng rng(303);
    double worst_shift = 0, worst_scale = 0;
    int argmin_moves = 0;
    for (int t = 0; t < 12; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
        const Eigen::MatrixXd x = unit_lhd_maximin(10 * d, d, rng);
        const DesignSet design(x, smooth_response(x));
        const SearchBox box = default_beta_box(d);
        Rng grid_rng(7);
        Eigen::MatrixXd grid(101, 1);
        if (d == 1)
            grid.col(0) = Eigen::VectorXd::LinSpaced(101, box.lower()[0], box.upper()[0]);
        else
            grid = lhd_maximin(101, box, grid_rng);
        const double n = static_cast<double>(design.size());
        const std::pair<double, double> moves[] = {{3.7, 1.0}, {-250.0, 1.0}, {0.0, 0.01}, {0.0, 42.0}};
        std::vector<double> base(101);
        for (Eigen::Index g = 0; g < 101; ++g) base[static_cast<std::size_t>(g)] = evaluate_deviance(design, grid.row(g).transpose()).value;
        const auto base_arg = std::min_element(base.begin(), base.end()) - base.begin();
        for (const auto& [shift, scale] : moves) {
            const DesignSet moved(x, (design.outputs().array() * scale + shift).matrix());
            std::vector<double> vals(101);
            for (Eigen::Index g = 0; g < 101; ++g) {
                const auto gi = static_cast<std::size_t>(g);
                vals[gi] = evaluate_deviance(moved, grid.row(g).transpose()).value;
                const double expected = base[gi] + 2.0 * n * std::log(scale);
                const double err = std::fabs(vals[gi] - expected) / std::max({1.0, std::fabs(vals[gi]), std::fabs(expected)});
                (scale == 1.0 ? worst_shift : worst_scale) = std::max(scale == 1.0 ? worst_shift : worst_scale, err);
            }
            if (std::min_element(vals.begin(), vals.end()) - vals.begin() != base_arg) ++argmin_moves;
        }
    }
    return {worst_shift <= kInvarianceTol && worst_scale <= kInvarianceTol && argmin_moves == 0,
            fmt("max rel err translation %.1e, scaling %.1e; argmin changes %d of 48", worst_shift, worst_scale,
                argmin_moves)};
}

Verdict nugget_bound() {
    const auto t0 = Clock::now();
    Rng rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double limit = std::exp(25.0) * kKappaSlack;
    double worst = 0;
    int ill = 0;
    for (int t = 0; t < 50; ++t) {
        const auto d = static_cast<Eigen::Index>(1 + t % 3);
        const Eigen::Index clusters = 3 + t % 3;
        const Eigen::Index per = 2 + t % 3;
        Eigen::MatrixXd x(clusters * per, d);
        for (Eigen::Index c = 0; c < clusters; ++c) {
            const Eigen::VectorXd centre = uniform_vector(d, rng, 0.0, 1.0);
            for (Eigen::Index j = 0; j < per; ++j)
                x.row(c * per + j) = (centre + uniform_vector(d, rng, -1e-4, 1e-4)).transpose();
        }
        const Eigen::VectorXd beta = Eigen::VectorXd::Constant(d, -1.0 - 2.0 * u(rng));
        const MatrixR r = build_correlation(x, CorrelationSpec::uniform(beta));
        const double delta = nugget_lower_bound(r, 25.0);
        oracle::Mat rd = oracle::correlation(to_oracle(x), to_oracle(beta), oracle::Vec(static_cast<std::size_t>(d), 2.0L));
        const oracle::Vec raw = oracle::jacobi_eigenvalues(rd);
        if (raw.front() <= 0 || raw.back() / raw.front() > std::exp(25.0L)) ++ill;
        for (std::size_t i = 0; i < rd.size(); ++i) rd[i][i] += delta;
        const oracle::Vec ev = oracle::jacobi_eigenvalues(rd);
        const double kappa = static_cast<double>(ev.back() / ev.front());
        worst = std::max(worst, ev.front() > 0 ? kappa : std::numeric_limits<double>::infinity());
    }
    const double secs = seconds_since(t0);
    return {ill == 50 && worst <= limit && secs < kNuggetSeconds,
            fmt("%d/50 designs ill-conditioned before the nugget; max kappa(R + delta I)/e^25 = %.4f; %.2f s", ill,
                worst / std::exp(25.0), secs)};
}

struct TableRuns {
    BenchmarkRun hump;
    BenchmarkRun goldstein;
    double seconds = 0;
};

Verdict table_reproduction(const TableRuns& runs) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& row : runs.hump.rows) {
        lo = std::min(lo, row.mean_rmspe);
        hi = std::max(hi, row.mean_rmspe);
    }
    const double spread = hi / lo - 1.0;
    const double fe_direct = row_of(runs.goldstein, StrategyId::DirectBfgs).mean_fe;
    const double fe_half = row_of(runs.goldstein, StrategyId::MsBfgsHalfd).mean_fe;
    const double fe_2d1 = row_of(runs.goldstein, StrategyId::MsBfgs2d1).mean_fe;
    const double ratio = fe_direct / fe_2d1;
    const double gap = row_of(runs.goldstein, StrategyId::DirectBfgs).pct_deviance;
    bool failures = false;
    for (const auto* run : {&runs.hump, &runs.goldstein})
        for (const auto& row : run->rows) failures = failures || row.failures > 0;
    const bool pass = spread <= kHumpRmspeSpread && fe_direct < fe_half && fe_half < fe_2d1 && ratio >= kFeRatioLow &&
                      ratio <= kFeRatioHigh && gap <= kDevianceGapPct && !failures && runs.seconds < kTableSeconds;
    return {pass, fmt("hump RMSPE spread %.3f%%; Goldstein-Price FE %.1f < %.1f < %.1f, ratio %.3f, "
                      "DIRECT-BFGS deviance gap %.3f%%; %.0f s",
                      100.0 * spread, fe_direct, fe_half, fe_2d1, ratio, gap, runs.seconds)};
}

Verdict consistency(const TableRuns& runs) {
    double worst = 0;
    for (const auto* run : {&runs.hump, &runs.goldstein})
        for (const auto& row : run->rows) worst = std::max(worst, row.rmspe_std_err / row.mean_rmspe);
    return {worst <= kStdErrFraction, fmt("max rmspe_std_err/mean RMSPE %.4f", worst)};
}

Verdict schwefel() {
    const auto t0 = Clock::now();
    const BenchmarkRun run = audited_benchmark("schwefel", 10);
    const double secs = seconds_since(t0);
    const BenchmarkResult& direct = row_of(run, StrategyId::DirectBfgs);
    const BenchmarkResult& ms = row_of(run, StrategyId::MsBfgs2d1);
    const double total_direct = direct.mean_fe * static_cast<double>(direct.replicates);
    const double total_ms = ms.mean_fe * static_cast<double>(ms.replicates);
    const bool pass = direct.replicates == 10 && ms.replicates == 10 && total_direct < kSchwefelFeFraction * total_ms &&
                      direct.pct_deviance <= kDevianceGapPct && secs < kSchwefelSeconds;
    return {pass, fmt("total FE DIRECT-BFGS %.0f vs MS-BFGS-2d1 %.0f (ratio %.3f); deviance gap %.3f%%; %.0f s",
                      total_direct, total_ms, total_direct / total_ms, direct.pct_deviance, secs)};
}

double five_point(const Objective& f, const Eigen::VectorXd& x, Eigen::Index k, double h) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
    e[k] = h;
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h);
}

Verdict optimizer_gates() {
    std::ostringstream detail;
    bool pass = true;

    const Objective rosen = [](const Eigen::VectorXd& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const OptReport br = bfgs_minimize(rosen, x0);
    const double rosen_err = (br.beta_star.array() - 1.0).abs().maxCoeff();
    pass = pass && rosen_err <= kRosenbrockTol && br.value <= kRosenbrockTol;
    detail << fmt("Rosenbrock |x - 1| %.1e, f %.1e", rosen_err, br.value);

    std::int64_t direct_calls = 0;
    const Objective quad = [&direct_calls](const Eigen::VectorXd& x) {
        ++direct_calls;
        return std::pow(x[0] - 0.7, 2);
    };
    const OptReport dr = direct_search(quad, SearchBox(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)), 100);
    const double direct_err = std::fabs(dr.beta_star[0] - 0.7);
    pass = pass && direct_err <= kDirectTol && direct_calls == 100 && dr.fe_used == 100;
    detail << fmt("; DIRECT |x - 0.7| %.1e in %lld FEs", direct_err, static_cast<long long>(direct_calls));

    Rng rng(1);
    const TestFunction hump = test_function("hump");
    const Eigen::MatrixXd x = unit_lhd_maximin(10, 1, rng);
    const DevianceFunction dev(DesignSet(x, hump.evaluate(x)));
    const Objective f = [&dev](const Eigen::VectorXd& b) { return dev(b); };
    const SearchBox box = if_beta_box(1);
    double grid_best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2001; ++i)
        grid_best = std::min(grid_best, f(Eigen::VectorXd::Constant(1, box.lower()[0] + box.range()[0] * i / 2000.0)));
    IfOptions ifo;
    ifo.box = box;
    const OptReport ir = implicit_filtering(f, box.center(), ifo);
    pass = pass && ir.value <= grid_best + kIfGridTol;
    detail << fmt("; IF %.6f vs grid %.6f", ir.value, grid_best);

    const Objective smooth[] = {
        [](const Eigen::VectorXd& v) { return std::sin(v[0]) * std::exp(0.3 * v[1]) + v[0] * v[0] * v[1]; },
        [](const Eigen::VectorXd& v) { return std::log1p(v.squaredNorm()) + std::cos(v[0] - 2.0 * v[1]); },
        rosen,
    };
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst_grad = 0;
    for (const auto& g : smooth) {
        for (int t = 0; t < 20; ++t) {
            Eigen::VectorXd p(2);
            p << u(rng), u(rng);
            const Eigen::VectorXd cg = central_gradient(g, p, g(p), BfgsOptions{}.grad_step);
            for (Eigen::Index k = 0; k < 2; ++k) worst_grad = std::max(worst_grad, rel_err(cg[k], five_point(g, p, k, 1e-3), 1e-2));
        }
    }
    pass = pass && worst_grad <= kGradientTol;
    detail << fmt("; gradient max rel err %.1e", worst_grad);
    return {pass, detail.str()};
}

Verdict fe_accounting() {
    // a few direct fits on top of the benchmark records already audited
    Rng rng(909);
    const TestFunction gp = test_function("goldstein-price");
    const Eigen::MatrixXd x = unit_lhd_maximin(20, 2, rng);
    const DesignSet design(x, gp.evaluate(x));
    for (const StrategyId id : kAllStrategies) audited_fit(design, id);
    const auto fits = ledger().fits.load();
    const auto bad = ledger().mismatches.load();
    return {fits > 0 && bad == 0, fmt("%lld fits audited, %lld mismatches", static_cast<long long>(fits),
                                      static_cast<long long>(bad))};
}

}  // namespace

int main() {
    int failed = 0;
    const auto report = [&failed](int id, const char* title, const Verdict& v) {
        std::printf("%s  %d. %s: %s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str());
        std::fflush(stdout);
        if (!v.pass) ++failed;
    };

    report(1, "oracle equivalence", oracle_equivalence());
    report(2, "interpolation", interpolation());
    report(3, "invariance", invariance());
    report(4, "nugget bound", nugget_bound());

    TableRuns runs;
    const auto t0 = Clock::now();
    runs.hump = audited_benchmark("hump", 25);
    runs.goldstein = audited_benchmark("goldstein-price", 25);
    runs.seconds = seconds_since(t0);
    report(5, "hump and Goldstein-Price reproduction", table_reproduction(runs));
    report(6, "RMSPE standard errors", consistency(runs));
    report(7, "Schwefel 5-D spot check", schwefel());
    report(8, "optimizer gates", optimizer_gates());
    report(9, "FE accounting", fe_accounting());

    std::printf("%d of 9 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
