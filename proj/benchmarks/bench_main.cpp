#include <benchmark/benchmark.h>

#include <cmath>

#include "pelab/curvature.hpp"
#include "pelab/extension.hpp"
#include "pelab/holder.hpp"
#include "pelab/model.hpp"
#include "pelab/operators.hpp"
#include "pelab/solver.hpp"

namespace {

void BM_SolveVsHyperbolic(benchmark::State& state) {
    auto g = pelab::make_hyperbolic(3);
    for (auto _ : state) {
        auto c = pelab::solve_vs(g, 3.5);
        benchmark::DoNotOptimize(c.report.defining_residual);
    }
}
BENCHMARK(BM_SolveVsHyperbolic);

void BM_SolveVsAdsSchw(benchmark::State& state) {
    auto g = pelab::make_ads_schwarzschild(3, 0.3);
    for (auto _ : state) {
        auto c = pelab::solve_vs(g, 3.5);
        benchmark::DoNotOptimize(c.report.defining_residual);
    }
}
BENCHMARK(BM_SolveVsAdsSchw);

void BM_GjmsChain(benchmark::State& state) {
    auto g = pelab::make_hyperbolic(3);
    auto fg = pelab::solve_w(g);
    for (auto _ : state) {
        auto p = pelab::apply_gjms_plus(g, 2, fg.v_or_w);
        benchmark::DoNotOptimize(p.max_abs());
    }
}
BENCHMARK(BM_GjmsChain);

void BM_CurvatureSuite(benchmark::State& state) {
    auto g = pelab::make_hyperbolic(3);
    auto c = pelab::solve_vs(g, 3.5);
    for (auto _ : state) {
        auto cur = pelab::compactified_curvatures(c, g);
        benchmark::DoNotOptimize(cur.J_boundary);
    }
}
BENCHMARK(BM_CurvatureSuite);

void BM_WeightedNorm(benchmark::State& state) {
    auto g = pelab::make_hyperbolic(3);
    auto c = pelab::solve_vs(g, 2.75);
    for (auto _ : state) {
        auto est = pelab::weighted_norm(g, c.phi_s, 2, 0.4, 0.0);
        benchmark::DoNotOptimize(est.value);
    }
}
BENCHMARK(BM_WeightedNorm);

void BM_MollifyExtend(benchmark::State& state) {
    auto f = pelab::BoundaryFunction::from_function([](double y) {
        double u = y / 0.85;
        return (std::abs(u) < 1.0) ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    });
    for (auto _ : state) {
        auto F = pelab::mollify_extend(f, 2, 1);
        benchmark::DoNotOptimize(F.values.back());
    }
}
BENCHMARK(BM_MollifyExtend);

} // namespace

BENCHMARK_MAIN();
