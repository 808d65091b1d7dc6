#include <benchmark/benchmark.h>

#include <random>

#include "hypmono/gluing.hpp"
#include "hypmono/radial.hpp"
#include "hypmono/spectral.hpp"
#include "hypmono/weighted.hpp"

using namespace hypmono;

namespace {

void BM_AnalyticResidual(benchmark::State& st) {
    const ConfigFn f = chakrabarti_fn({1.0}, GaugePatch::north);
    const PolarPoint p{1.3, 0.9, 0.4};
    for (auto _ : st) benchmark::DoNotOptimize(norm_one_form(bogomolny_residual(analytic_jet(f, p), p), p));
}
BENCHMARK(BM_AnalyticResidual);

void BM_GridResidual(benchmark::State& st) {
    const ConfigFn f = chakrabarti_fn({1.0}, GaugePatch::north);
    const PolarPoint p{1.3, 0.9, 0.4};
    for (auto _ : st) benchmark::DoNotOptimize(norm_one_form(bogomolny_residual(grid_jet(f, p, 1e-3), p), p));
}
BENCHMARK(BM_GridResidual);

void BM_GluedResidual(benchmark::State& st) {
    GluingSpec s;
    s.params.m = 1.0;
    s.centers = axial_centers(static_cast<int>(st.range(0)), 2.0, 14.0);
    const PolarPoint p{3.4, 1.1, 0.2};
    for (auto _ : st) benchmark::DoNotOptimize(residual_norm_at(s, 0, p));
}
BENCHMARK(BM_GluedResidual)->Arg(1)->Arg(3);

void BM_WeightedResidualNorm(benchmark::State& st) {
    const GluingSpec s = single_center(1.0, 2.0, 0.25);
    const NormOptions opt{static_cast<int>(st.range(0)), static_cast<int>(st.range(0))};
    for (auto _ : st) benchmark::DoNotOptimize(weighted_residual_norm(s, opt));
}
BENCHMARK(BM_WeightedResidualNorm)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_PairOperatorAssembly(benchmark::State& st) {
    BoxGrid g;
    g.nr = static_cast<int>(st.range(0));
    g.nth = 10;
    g.nchi = 8;
    const Background bg = sample_background(g, chakrabarti_fn({1.0}, GaugePatch::base), 0.25);
    for (auto _ : st) {
        PairOperators ops(g, bg);
        benchmark::DoNotOptimize(ops.delta().nonZeros());
    }
}
BENCHMARK(BM_PairOperatorAssembly)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_LowestEigenpairs(benchmark::State& st) {
    RadialOperatorSpec s;
    s.kind = static_cast<RadialKind>(st.range(0));
    s.beta = 0.5;
    s.lambda = s.kind == RadialKind::prototype ? 0.0 : 2.0;
    s.h = 0.01;
    const RadialOperator op = build_radial_operator(s);
    for (auto _ : st) benchmark::DoNotOptimize(lowest_eigenpairs(op.S, 4, true).values.front());
}
BENCHMARK(BM_LowestEigenpairs)
    ->Arg(static_cast<int>(RadialKind::prototype))
    ->Arg(static_cast<int>(RadialKind::D1))
    ->Arg(static_cast<int>(RadialKind::D3_floer))
    ->Unit(benchmark::kMillisecond);

void BM_ContinuitySolve(benchmark::State& st) {
    const ReducedProblem pb(single_center(1.0, 2.0, 0.25), 14.0, 0.01);
    for (auto _ : st) benchmark::DoNotOptimize(continuity_solve(pb, SolverParams{}).converged);
}
BENCHMARK(BM_ContinuitySolve)->Unit(benchmark::kMillisecond);

void BM_ChargeAndMass(benchmark::State& st) {
    const ConfigFn f = chakrabarti_fn({1.0}, GaugePatch::north);
    for (auto _ : st) benchmark::DoNotOptimize(charge_and_mass(f).k_est);
}
BENCHMARK(BM_ChargeAndMass)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
