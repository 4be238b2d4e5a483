#include <benchmark/benchmark.h>

#include "biphase/pgs.hpp"
#include "biphase/problem.hpp"
#include "biphase/regularized.hpp"
#include "biphase/verification.hpp"

namespace {

using namespace biphase;

void BM_PgsSweeps1D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SampledProblem p = sample(example1(), Grid::make(1, n));
    const SolverConfig cfg = SolverConfig::fixed_sweeps(100);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, cfg).solution[1]);
    state.SetItemsProcessed(state.iterations() * 100 * (n - 1));
}
BENCHMARK(BM_PgsSweeps1D)->Arg(100)->Arg(1000)->Arg(10000);

void BM_PgsSweeps2D(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const SampledProblem p = sample(example2(), Grid::make(2, n));
    const SolverConfig cfg = SolverConfig::fixed_sweeps(20);
    for (auto _ : state) benchmark::DoNotOptimize(solve(p, cfg).solution[0]);
    state.SetItemsProcessed(state.iterations() * 20 * (n - 1) * (n - 1));
}
BENCHMARK(BM_PgsSweeps2D)->Arg(50)->Arg(100)->Arg(200);

void BM_PgsConverged1D(benchmark::State& state) {
    const SampledProblem p = sample(example1(), Grid::make(1, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(solve(p).sweeps);
}
BENCHMARK(BM_PgsConverged1D)->Arg(65)->Arg(230)->Unit(benchmark::kMillisecond);

void BM_Regularized1D(benchmark::State& state) {
    const SampledProblem p = sample(example1(), Grid::make(1, 100));
    RegularizationConfig cfg;
    cfg.eps = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_regularized(p, cfg).sweeps);
}
BENCHMARK(BM_Regularized1D)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_OracleEnumeration(benchmark::State& state) {
    const SampledProblem p = random_problem(Grid::make(1, static_cast<int>(state.range(0))), 1);
    for (auto _ : state) benchmark::DoNotOptimize(oracle_solve(p).energy);
}
BENCHMARK(BM_OracleEnumeration)->Arg(4)->Arg(8)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_OracleCoordinateDescent(benchmark::State& state) {
    const SampledProblem p = random_problem(Grid::make(2, 9), 1);
    for (auto _ : state) benchmark::DoNotOptimize(oracle_solve(p).energy);
}
BENCHMARK(BM_OracleCoordinateDescent)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
