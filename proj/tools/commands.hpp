#pragma once

#include "gpdevopt/benchmark.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gpdev::cli {

struct FitCommand {
    std::string data;
    std::string out;
    StrategyId strategy = StrategyId::DirectBfgs;
    double p = 2.0;
    double box_scale = 1.0;
    std::uint64_t seed = 1;
};

struct PredictCommand {
    std::string model;
    std::string points;
    std::string out;  ///< empty or "-" writes to the output stream
};

enum class TableFormat { Csv, Json, Markdown };

struct BenchmarkCommand {
    std::string function = "all";
    std::vector<StrategyId> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    std::size_t replicates = 25;
    std::uint64_t seed = 1;
    TableFormat format = TableFormat::Markdown;
    double p = 2.0;
    double box_scale = 1.0;
    std::string out;  ///< table destination, empty for the output stream
    std::string raw;  ///< per-replicate CSV, empty to skip
};

enum class SurfaceMode { Deviance, Prediction };

struct SurfaceCommand {
    std::string function;  ///< exactly one of function / data
    std::string data;
    std::size_t grid = 101;
    std::string out;
    SurfaceMode mode = SurfaceMode::Deviance;
    StrategyId strategy = StrategyId::DirectBfgs;
    double p = 2.0;
    double box_scale = 1.0;
    std::uint64_t seed = 1;
};

int run_fit(const FitCommand& cmd, std::ostream& out, std::ostream& err);
int run_predict(const PredictCommand& cmd, std::ostream& out, std::ostream& err);
int run_benchmark_command(const BenchmarkCommand& cmd, std::ostream& out, std::ostream& err);
int run_surface(const SurfaceCommand& cmd, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes benchmark tables in the requested format.
void write_table(std::ostream& out, const std::vector<BenchmarkRun>& runs, TableFormat format,
                 std::size_t replicates, std::uint64_t seed);
void write_raw(std::ostream& out, const std::vector<BenchmarkRun>& runs);

/// Applies --threads, with GPDEVOPT_THREADS taking precedence.
void configure_threads(std::optional<int> requested);

}  // namespace gpdev::cli
