#include <benchmark/benchmark.h>

#include "qce/qce.hpp"

namespace {

using namespace qce;

void BM_SolveLambda(benchmark::State& state) {
    const double sigma = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_lambda(sigma));
    }
}
BENCHMARK(BM_SolveLambda);

void BM_EstimatePipeline(benchmark::State& state) {
    const int n_theta = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_from_mean(0.5, n_theta, 8));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EstimatePipeline)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_Reconstruct(benchmark::State& state) {
    const SphericalGrid grid = make_grid(64, 8);
    const JointDensity density = maxent_density(solve_lambda(0.5), grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct_density_matrix(density));
    }
}
BENCHMARK(BM_Reconstruct);

void BM_Sample(benchmark::State& state) {
    const auto dist = ensemble_bell(Arrangement::bell_pair(z_axis(), x_axis()));
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(dist, 42, n));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(10000)->Arg(1000000);

void BM_SampleParallel(benchmark::State& state) {
    const auto dist = ensemble_bell(Arrangement::bell_pair(z_axis(), x_axis()));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(dist, 42, 1000000, 4));
    }
    state.SetItemsProcessed(state.iterations() * 1000000);
}
BENCHMARK(BM_SampleParallel);

void BM_Interferometer(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_experiment(OpticalSetup::double_bs(), 7, 100000));
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_Interferometer);

} // namespace

BENCHMARK_MAIN();
