#include "csf/curve.hpp"
#include "csf/exact.hpp"
#include "csf/flow.hpp"
#include "csf/functionals.hpp"
#include "csf/spectral.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace csf;

static void BM_SemiImplicitStep(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const FlowSnapshot s{0.0, shrinking_circle(1.0, 0.0, n), Scheme::SemiImplicit, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(step_parametric(s, 1e-4, Scheme::SemiImplicit));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SemiImplicitStep)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

static void BM_Geometry(benchmark::State& state)
{
    const auto c = shrinking_circle(1.0, 0.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(geometry(c));
}
BENCHMARK(BM_Geometry)->Arg(1024)->Arg(8192);

static void BM_ResampleSpacing(benchmark::State& state)
{
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    const auto c = trombone_initial(spec, -50);
    for (auto _ : state) benchmark::DoNotOptimize(resample_spacing(c, 0.05));
}
BENCHMARK(BM_ResampleSpacing);

static void BM_TromboneInitial(benchmark::State& state)
{
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    for (auto _ : state) benchmark::DoNotOptimize(trombone_initial(spec, -50));
}
BENCHMARK(BM_TromboneInitial);

static void BM_EntropyCircle(benchmark::State& state)
{
    const auto c = shrinking_circle(1.0, 0.0, 1024);
    for (auto _ : state) benchmark::DoNotOptimize(entropy(c));
}
BENCHMARK(BM_EntropyCircle)->Unit(benchmark::kMillisecond);

static void BM_Project(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const double rho = 20;
    std::vector<double> y(n), u(n);
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = -2 * rho + 4 * rho * j / (n - 1);
        u[j] = std::exp(-0.1 * y[j] * y[j]);
    }
    const auto uh = cutoff(y, u, rho);
    for (auto _ : state) benchmark::DoNotOptimize(project(y, uh, rho, -5.0));
}
BENCHMARK(BM_Project)->Arg(2001)->Arg(16001);

static void BM_TromboneEvolveUnit(benchmark::State& state)
{
    const TromboneSpec spec{{0, 1, 2}, {0, 0}, Pointing::Left};
    const auto c = trombone_initial(spec, -50);
    FlowOptions o;
    o.dt = 4e-3;
    o.spacing = 0.05;
    for (auto _ : state) benchmark::DoNotOptimize(evolve(c, -50, -49, o));
}
BENCHMARK(BM_TromboneEvolveUnit)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK_MAIN();
