#include "gpdevopt/kernels.hpp"
#include "gpdevopt/lhd.hpp"

#include <benchmark/benchmark.h>

using namespace gpdev;

namespace {

// Training sizes follow the 10d rule: n = 10 * d.
Eigen::MatrixXd design_for(std::int64_t d) {
    Rng rng(7);
    return unit_lhd_maximin(static_cast<std::size_t>(10 * d), static_cast<std::size_t>(d), rng, 1);
}

template <void (*Kernel)(const DistanceCache&, const Eigen::VectorXd&, MatrixR&)>
void BM_Correlation(benchmark::State& state) {
    const auto d = state.range(0);
    const Eigen::MatrixXd x = design_for(d);
    const DistanceCache cache(x, Eigen::VectorXd::Constant(d, 2.0));
    const Eigen::VectorXd beta = Eigen::VectorXd::Constant(d, 0.5);
    MatrixR out;
    for (auto _ : state) {
        Kernel(cache, beta, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["pairs"] = static_cast<double>(cache.pairs());
}

template <void (*Kernel)(const Eigen::MatrixXd&, const Eigen::MatrixXd&, const CorrelationSpec&, MatrixR&)>
void BM_CrossCorrelation(benchmark::State& state) {
    const auto d = state.range(0);
    const Eigen::MatrixXd x = design_for(d);
    Rng rng(11);
    const Eigen::MatrixXd points = unit_lhd_maximin(static_cast<std::size_t>(100 * d), static_cast<std::size_t>(d), rng, 1);
    const CorrelationSpec spec = CorrelationSpec::uniform(Eigen::VectorXd::Constant(d, 0.5));
    MatrixR out;
    for (auto _ : state) {
        Kernel(x, points, spec, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <double (*Kernel)(const Eigen::MatrixXd&)>
void BM_MinDistance(benchmark::State& state) {
    Rng rng(13);
    const auto n = static_cast<std::size_t>(state.range(0));
    const Eigen::MatrixXd x = unit_lhd_maximin(n, 6, rng, 1);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(x));
}

}  // namespace

BENCHMARK(BM_Correlation<kernels::correlation_serial>)->Name("correlation/serial")->DenseRange(2, 12, 5);
BENCHMARK(BM_Correlation<kernels::correlation_parallel>)->Name("correlation/parallel")->DenseRange(2, 12, 5);
BENCHMARK(BM_CrossCorrelation<kernels::cross_correlation_serial>)->Name("cross_correlation/serial")->DenseRange(2, 12, 5);
BENCHMARK(BM_CrossCorrelation<kernels::cross_correlation_parallel>)->Name("cross_correlation/parallel")->DenseRange(2, 12, 5);
BENCHMARK(BM_MinDistance<kernels::min_pairwise_distance_serial>)->Name("min_distance/serial")->Arg(200)->Arg(1200);
BENCHMARK(BM_MinDistance<kernels::min_pairwise_distance_parallel>)->Name("min_distance/parallel")->Arg(200)->Arg(1200);

BENCHMARK_MAIN();
