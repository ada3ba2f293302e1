#include "commands.hpp"

#include "csv.hpp"
#include "model_io.hpp"

#include "gpdevopt/errors.hpp"
#include "gpdevopt/lhd.hpp"
#include "gpdevopt/search_box.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

namespace gpdev::cli {
namespace {

struct TrainingData {
    std::vector<std::string> inputs;
    Eigen::MatrixXd raw;
    Eigen::VectorXd y;
};

// Columns x1..xd plus y, in any order.
TrainingData load_training(const std::string& path) {
    const CsvTable table = read_csv_file(path);
    const auto y_col = table.column("y");
    if (!y_col) throw InvalidInput(path + ": missing 'y' column");
    std::vector<std::size_t> x_cols;
    TrainingData data;
    for (std::size_t k = 1;; ++k) {
        const auto c = table.column("x" + std::to_string(k));
        if (!c) break;
        x_cols.push_back(*c);
        data.inputs.push_back("x" + std::to_string(k));
    }
    if (x_cols.empty()) throw InvalidInput(path + ": no input columns named x1..xd");
    if (table.header.size() != x_cols.size() + 1)
        throw InvalidInput(path + ": expected only columns x1..x" + std::to_string(x_cols.size()) +
                           " and y");
    if (table.rows.size() < 2) throw InvalidInput(path + ": need at least two data rows");
    data.raw = table.columns(x_cols);
    data.y = table.columns({*y_col}).col(0);
    return data;
}

Eigen::MatrixXd scale_rows(const InputScaling& s, const Eigen::MatrixXd& raw) {
    Eigen::MatrixXd out(raw.rows(), raw.cols());
    for (Eigen::Index i = 0; i < raw.rows(); ++i) out.row(i) = s.to_unit(raw.row(i).transpose()).transpose();
    return out;
}

std::string join(const Eigen::VectorXd& v, const char* sep) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += format_double(v[i]);
    }
    return s;
}

void check_exponent(double p) {
    if (p != 2.0 && p != 1.99) throw InvalidInput("--p must be 2 or 1.99");
}

// Writes to the file at `path`, or to `fallback` when path is empty or "-".
template <class Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream file(path);
    if (!file) throw InvalidInput("cannot write '" + path + "'");
    fn(file);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? 0.5 * (lo + hi)
                        : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::string pct(double v) {
    if (v == 0.0) return "-";
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
}

}  // namespace

void configure_threads(std::optional<int> requested) {
    if (const char* env = std::getenv("GPDEVOPT_THREADS"); env && *env) {
        const int n = std::atoi(env);
        if (n > 0) {
            omp_set_num_threads(n);
            return;
        }
    }
    if (requested && *requested > 0) omp_set_num_threads(*requested);
}

int run_fit(const FitCommand& cmd, std::ostream& out, std::ostream&) {
    check_exponent(cmd.p);
    const TrainingData data = load_training(cmd.data);
    ModelFile model;
    model.scaling = InputScaling::fit(data.raw);
    model.inputs = data.inputs;
    const DesignSet design(scale_rows(model.scaling, data.raw), data.y);

    FitOptions opts;
    opts.deviance.p = cmd.p;
    opts.search.box_scale = cmd.box_scale;
    opts.search.seed = cmd.seed;
    const FitResult result = fit_detailed(design, cmd.strategy, opts);

    model.strategy = std::string(to_string(cmd.strategy));
    model.p = cmd.p;
    model.a = result.model.a();
    model.box_scale = cmd.box_scale;
    model.seed = cmd.seed;
    model.design = design.points();
    model.y = design.outputs();
    model.beta = result.model.beta();
    model.mu_hat = result.model.mu_hat();
    model.sigma2_hat = result.model.sigma2_hat();
    model.delta = result.model.delta();
    model.deviance = result.model.deviance();
    model.fe_count = result.model.fe_count();
    save_model(model, cmd.out);

    out << "strategy: " << model.strategy << '\n'
        << "deviance: " << format_double(model.deviance) << '\n'
        << "fe: " << model.fe_count << '\n'
        << "delta_lb: " << format_double(model.delta) << '\n'
        << "beta: " << join(model.beta, " ") << '\n'
        << "mu_hat: " << format_double(model.mu_hat) << '\n'
        << "sigma2_hat: " << format_double(model.sigma2_hat) << '\n';
    return 0;
}

int run_predict(const PredictCommand& cmd, std::ostream& out, std::ostream& err) {
    const ModelFile model = load_model(cmd.model);
    const FittedGP gp = rebuild(model);
    const CsvTable table = read_csv_file(cmd.points);
    std::vector<std::size_t> cols;
    for (const auto& name : model.inputs) {
        const auto c = table.column(name);
        if (!c) throw InvalidInput(cmd.points + ": missing column '" + name + "'");
        cols.push_back(*c);
    }
    const Eigen::MatrixXd raw = table.columns(cols);
    Eigen::MatrixXd unit = scale_rows(model.scaling, raw);
    std::size_t clamped = 0;
    for (Eigen::Index i = 0; i < unit.rows(); ++i) {
        const Eigen::VectorXd row = unit.row(i).transpose();
        const Eigen::VectorXd c = row.cwiseMax(0.0).cwiseMin(1.0);
        if (c != row) ++clamped;
        unit.row(i) = c.transpose();
    }
    if (clamped > 0)
        err << "warning: " << clamped << " row(s) outside the training range were clamped\n";
    const auto preds = gp.predict_many(unit);

    with_output(cmd.out, out, [&](std::ostream& os) {
        std::vector<std::string> header = table.header;
        header.emplace_back("y_hat");
        header.emplace_back("mse");
        write_csv_row(os, header);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            std::vector<std::string> cells;
            for (const double v : table.rows[r]) cells.push_back(format_double(v));
            cells.push_back(format_double(preds[r].y_hat));
            cells.push_back(format_double(preds[r].mse));
            write_csv_row(os, cells);
        }
    });
    return 0;
}

void write_table(std::ostream& out, const std::vector<BenchmarkRun>& runs, TableFormat format,
                 std::size_t replicates, std::uint64_t seed) {
    switch (format) {
        case TableFormat::Csv: {
            write_csv_row(out, {"function", "d", "strategy", "pct_deviance", "pct_rmspe", "mean_fe",
                                "mean_deviance", "mean_rmspe", "rmspe_std_err", "replicates",
                                "failures"});
            for (const auto& run : runs)
                for (const auto& r : run.rows)
                    write_csv_row(out, {run.function, std::to_string(run.d),
                                        std::string(to_string(r.strategy)), format_double(r.pct_deviance),
                                        format_double(r.pct_rmspe), format_double(r.mean_fe),
                                        format_double(r.mean_deviance), format_double(r.mean_rmspe),
                                        format_double(r.rmspe_std_err), std::to_string(r.replicates),
                                        std::to_string(r.failures)});
            break;
        }
        case TableFormat::Json: {
            nlohmann::ordered_json all = nlohmann::ordered_json::array();
            for (const auto& run : runs) {
                nlohmann::ordered_json j;
                j["function"] = run.function;
                j["d"] = run.d;
                j["replicates"] = replicates;
                j["seed"] = seed;
                j["rows"] = nlohmann::ordered_json::array();
                for (const auto& r : run.rows) {
                    j["rows"].push_back({{"strategy", to_string(r.strategy)},
                                         {"pct_deviance", r.pct_deviance},
                                         {"pct_rmspe", r.pct_rmspe},
                                         {"mean_fe", r.mean_fe},
                                         {"mean_deviance", r.mean_deviance},
                                         {"mean_rmspe", r.mean_rmspe},
                                         {"rmspe_std_err", r.rmspe_std_err},
                                         {"replicates", r.replicates},
                                         {"failures", r.failures}});
                }
                j["warnings"] = run.warnings;
                all.push_back(std::move(j));
            }
            out << all.dump(2) << '\n';
            break;
        }
        case TableFormat::Markdown: {
            for (const auto& run : runs) {
                out << "### " << run.function << " (" << run.d << "-D), " << replicates
                    << " replicates\n\n"
                    << "| Algorithm | %ΔL | %ΔRMSPE | FE | mean L | mean RMSPE | Std. Err. |\n"
                    << "|---|---:|---:|---:|---:|---:|---:|\n";
                for (const auto& r : run.rows) {
                    std::ostringstream fe;
                    fe << std::fixed << std::setprecision(0) << r.mean_fe;
                    out << "| " << to_string(r.strategy) << " | " << pct(r.pct_deviance) << " | "
                        << pct(r.pct_rmspe) << " | " << fe.str() << " | "
                        << format_double(r.mean_deviance) << " | " << format_double(r.mean_rmspe)
                        << " | " << format_double(r.rmspe_std_err) << " |\n";
                }
                for (const auto& w : run.warnings) out << "\nwarning: " << w << '\n';
                out << '\n';
            }
            break;
        }
    }
}

void write_raw(std::ostream& out, const std::vector<BenchmarkRun>& runs) {
    write_csv_row(out, {"function", "replicate", "strategy", "fitted", "deviance", "rmspe", "fe",
                        "delta", "beta", "error"});
    for (const auto& run : runs)
        for (const auto& rec : run.records) {
            std::string error = rec.error;
            std::replace(error.begin(), error.end(), ',', ';');
            write_csv_row(out, {run.function, std::to_string(rec.replicate),
                                std::string(to_string(rec.strategy)), rec.fitted ? "1" : "0",
                                format_double(rec.deviance), format_double(rec.rmspe),
                                std::to_string(rec.fe), format_double(rec.delta),
                                join(rec.beta, ";"), error});
        }
}

int run_benchmark_command(const BenchmarkCommand& cmd, std::ostream& out, std::ostream& err) {
    check_exponent(cmd.p);
    std::vector<std::string> names;
    if (cmd.function == "all") {
        names = test_function_names();
    } else {
        names.push_back(cmd.function);
    }
    BenchmarkConfig config;
    config.strategies = cmd.strategies;
    config.replicates = cmd.replicates;
    config.seed = cmd.seed;
    config.deviance.p = cmd.p;
    config.search.box_scale = cmd.box_scale;

    std::vector<BenchmarkRun> runs;
    for (const auto& name : names) {
        runs.push_back(run_benchmark(test_function(name), config));
        for (const auto& w : runs.back().warnings) err << "warning: " << name << ": " << w << '\n';
    }
    with_output(cmd.out, out,
                [&](std::ostream& os) { write_table(os, runs, cmd.format, cmd.replicates, cmd.seed); });
    if (!cmd.raw.empty()) {
        std::ofstream raw(cmd.raw);
        if (!raw) throw InvalidInput("cannot write '" + cmd.raw + "'");
        write_raw(raw, runs);
    }
    return 0;
}

int run_surface(const SurfaceCommand& cmd, std::ostream& out, std::ostream&) {
    check_exponent(cmd.p);
    if (cmd.function.empty() == cmd.data.empty())
        throw InvalidInput("surface needs exactly one of --function or --data");
    if (cmd.grid < 1) throw InvalidInput("--grid must be at least 1");

    Eigen::MatrixXd unit;
    Eigen::VectorXd y;
    std::optional<InputScaling> scaling;
    if (!cmd.function.empty()) {
        const TestFunction fn = test_function(cmd.function);
        Rng rng(cmd.seed);
        unit = unit_lhd_maximin(10 * fn.d, fn.d, rng);
        y = fn.evaluate(unit);
    } else {
        const TrainingData data = load_training(cmd.data);
        scaling = InputScaling::fit(data.raw);
        unit = scale_rows(*scaling, data.raw);
        y = data.y;
    }
    const DesignSet design(unit, y);
    const std::size_t d = design.dim();
    DevianceOptions dopts;
    dopts.p = cmd.p;

    if (cmd.mode == SurfaceMode::Deviance) {
        if (d > 2) throw InvalidInput("deviance surfaces need d <= 2 (got d = " + std::to_string(d) + ")");
        const DevianceFunction deviance(design, dopts);
        const SearchBox box = default_beta_box(d, cmd.box_scale);
        const auto b1 = linspace(box.lower()[0], box.upper()[0], cmd.grid);
        const auto b2 = d == 2 ? linspace(box.lower()[1], box.upper()[1], cmd.grid)
                               : std::vector<double>{0.0};
        std::vector<double> values(b1.size() * b2.size());
        const auto total = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(dynamic, 4)
        for (std::int64_t idx = 0; idx < total; ++idx) {
            const auto i = static_cast<std::size_t>(idx) / b2.size();
            const auto j = static_cast<std::size_t>(idx) % b2.size();
            Eigen::VectorXd beta(static_cast<Eigen::Index>(d));
            beta[0] = b1[i];
            if (d == 2) beta[1] = b2[j];
            values[static_cast<std::size_t>(idx)] = deviance(beta);
        }
        with_output(cmd.out, out, [&](std::ostream& os) {
            write_csv_row(os, d == 2 ? std::vector<std::string>{"beta1", "beta2", "L"}
                                     : std::vector<std::string>{"beta1", "L"});
            for (std::size_t i = 0; i < b1.size(); ++i)
                for (std::size_t j = 0; j < b2.size(); ++j) {
                    std::vector<std::string> row{format_double(b1[i])};
                    if (d == 2) row.push_back(format_double(b2[j]));
                    row.push_back(format_double(values[i * b2.size() + j]));
                    write_csv_row(os, row);
                }
        });
        return 0;
    }

    if (d != 2) throw InvalidInput("prediction surfaces need d = 2 (got d = " + std::to_string(d) + ")");
    FitOptions fopts;
    fopts.deviance = dopts;
    fopts.search.box_scale = cmd.box_scale;
    fopts.search.seed = cmd.seed;
    const FittedGP gp = fit(design, cmd.strategy, fopts);
    const auto g = linspace(0.0, 1.0, cmd.grid);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(g.size() * g.size()), 2);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            pts.row(static_cast<Eigen::Index>(i * g.size() + j)) << g[i], g[j];
    const auto preds = gp.predict_many(pts);
    with_output(cmd.out, out, [&](std::ostream& os) {
        write_csv_row(os, {"x1", "x2", "y_hat", "mse"});
        for (Eigen::Index r = 0; r < pts.rows(); ++r) {
            const Eigen::VectorXd x =
                scaling ? scaling->to_raw(pts.row(r).transpose()) : Eigen::VectorXd(pts.row(r).transpose());
            const auto& pr = preds[static_cast<std::size_t>(r)];
            write_csv_row(os, {format_double(x[0]), format_double(x[1]), format_double(pr.y_hat),
                               format_double(pr.mse)});
        }
    });
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fit Gaussian process emulators by global deviance minimization", "gpdevopt"};
    app.require_subcommand(1);
    std::optional<int> threads;
    app.add_option("--threads", threads, "worker threads (GPDEVOPT_THREADS overrides)")
        ->check(CLI::PositiveNumber);

    auto strategy_check = CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                parse_strategy(s);
                return {};
            } catch (const InvalidInput& e) {
                return e.what();
            }
        },
        "STRATEGY");

    FitCommand fit_cmd;
    std::string fit_strategy = "DIRECT-BFGS";
    auto* fit_app = app.add_subcommand("fit", "fit a model to a CSV of x1..xd,y");
    fit_app->add_option("--data", fit_cmd.data, "training CSV")->required();
    fit_app->add_option("--out", fit_cmd.out, "model JSON to write")->required();
    fit_app->add_option("--strategy", fit_strategy, "optimizer strategy")->check(strategy_check);
    fit_app->add_option("--p", fit_cmd.p, "smoothness exponent (2 or 1.99)");
    fit_app->add_option("--box-scale", fit_cmd.box_scale, "search box scale")->check(CLI::PositiveNumber);
    fit_app->add_option("--seed", fit_cmd.seed, "random seed");

    PredictCommand pred_cmd;
    auto* pred_app = app.add_subcommand("predict", "predict at the rows of a CSV");
    pred_app->add_option("--model", pred_cmd.model, "model JSON")->required();
    pred_app->add_option("--points", pred_cmd.points, "CSV with the model's input columns")->required();
    pred_app->add_option("--out", pred_cmd.out, "output CSV (default stdout)");

    BenchmarkCommand bench_cmd;
    std::string bench_strategies = "all";
    std::string bench_format = "markdown";
    auto* bench_app = app.add_subcommand("benchmark", "compare strategies on test functions");
    bench_app->add_option("--function", bench_cmd.function, "test function name or 'all'");
    bench_app->add_option("--strategies", bench_strategies, "comma-separated strategies or 'all'");
    bench_app->add_option("--replicates", bench_cmd.replicates, "replicates per function")
        ->check(CLI::PositiveNumber);
    bench_app->add_option("--seed", bench_cmd.seed, "master seed");
    bench_app->add_option("--format", bench_format, "csv, json or markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    bench_app->add_option("--p", bench_cmd.p, "smoothness exponent (2 or 1.99)");
    bench_app->add_option("--box-scale", bench_cmd.box_scale, "search box scale")
        ->check(CLI::PositiveNumber);
    bench_app->add_option("--out", bench_cmd.out, "table output file (default stdout)");
    bench_app->add_option("--raw", bench_cmd.raw, "per-replicate CSV output");

    SurfaceCommand surf_cmd;
    std::string surf_mode = "deviance";
    std::string surf_strategy = "DIRECT-BFGS";
    auto* surf_app = app.add_subcommand("surface", "dump a deviance or prediction grid");
    auto* fn_opt = surf_app->add_option("--function", surf_cmd.function, "test function name");
    auto* data_opt = surf_app->add_option("--data", surf_cmd.data, "training CSV");
    fn_opt->excludes(data_opt);
    surf_app->add_option("--grid", surf_cmd.grid, "nodes per dimension")->check(CLI::PositiveNumber);
    surf_app->add_option("--out", surf_cmd.out, "output CSV (default stdout)");
    surf_app->add_option("--mode", surf_mode, "deviance or prediction")
        ->check(CLI::IsMember({"deviance", "prediction"}));
    surf_app->add_option("--strategy", surf_strategy, "strategy for prediction mode")
        ->check(strategy_check);
    surf_app->add_option("--p", surf_cmd.p, "smoothness exponent (2 or 1.99)");
    surf_app->add_option("--box-scale", surf_cmd.box_scale, "search box scale")
        ->check(CLI::PositiveNumber);
    surf_app->add_option("--seed", surf_cmd.seed, "seed for the function design");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        configure_threads(threads);
        if (*fit_app) {
            fit_cmd.strategy = parse_strategy(fit_strategy);
            return run_fit(fit_cmd, out, err);
        }
        if (*pred_app) return run_predict(pred_cmd, out, err);
        if (*bench_app) {
            if (bench_strategies != "all") {
                bench_cmd.strategies.clear();
                std::stringstream ss(bench_strategies);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) bench_cmd.strategies.push_back(parse_strategy(item));
            }
            bench_cmd.format = bench_format == "csv"    ? TableFormat::Csv
                               : bench_format == "json" ? TableFormat::Json
                                                        : TableFormat::Markdown;
            return run_benchmark_command(bench_cmd, out, err);
        }
        if (*surf_app) {
            surf_cmd.mode = surf_mode == "prediction" ? SurfaceMode::Prediction : SurfaceMode::Deviance;
            surf_cmd.strategy = parse_strategy(surf_strategy);
            return run_surface(surf_cmd, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace gpdev::cli
