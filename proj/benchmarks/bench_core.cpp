// Microbenchmarks for the hot paths: ensemble pushforward, bounded-Lipschitz
// distance (exact 1-D path and probe path), Bowen-metric evaluation, greedy
// cover construction, and the coarse-graining operator.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "ergokit/bowen.hpp"
#include "ergokit/cover.hpp"
#include "ergokit/density.hpp"
#include "ergokit/measure.hpp"
#include "ergokit/rng.hpp"
#include "ergokit/system.hpp"

namespace {

using namespace ergokit;

ParticleMeasure circle_ensemble(std::size_t n, std::uint64_t seed) {
    System sys = zoo::doubling();
    return sample_density(uniform_box(sys.space, {0.0}, {1.0}), n, seed);
}

ParticleMeasure torus_ensemble(std::size_t n, std::uint64_t seed) {
    System sys = zoo::cat();
    return sample_density(uniform_box(sys.space, {0.0, 0.0}, {1.0, 1.0}), n, seed);
}

void BM_EvolveMeasure(benchmark::State& state) {
    System sys = zoo::doubling_contract();
    const auto n = static_cast<std::size_t>(state.range(0));
    ParticleMeasure mu =
        sample_density(uniform_box(sys.space, {0.0, 0.5}, {1.0, 1.5}), n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_measure(sys, 8.0, mu));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvolveMeasure)->Arg(1000)->Arg(10000)->Arg(100000);

// 1-D circle: bl_distance takes the exact transport path (sorted merge).
void BM_BlDistanceExact1d(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    ParticleMeasure a = circle_ensemble(n, 1);
    ParticleMeasure b = circle_ensemble(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bl_distance(a, b));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BlDistanceExact1d)->Arg(1000)->Arg(10000)->Arg(100000);

// 2-torus: bl_distance evaluates the deterministic probe family.
void BM_BlDistanceProbes2d(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    ParticleMeasure a = torus_ensemble(n, 1);
    ParticleMeasure b = torus_ensemble(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bl_distance(a, b));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BlDistanceProbes2d)->Arg(1000)->Arg(10000);

void BM_BowenDistance(benchmark::State& state) {
    System sys = zoo::doubling();
    BowenContext ctx =
        make_bowen_context(sys, static_cast<double>(state.range(0)), 0.05);
    Rng rng = Rng::derive(7, 0);
    std::vector<Point> pts;
    for (int i = 0; i < 256; ++i)
        pts.push_back(sys.space.make_point({rng.uniform01()}));
    std::size_t i = 0;
    for (auto _ : state) {
        const Point& x = pts[i % pts.size()];
        const Point& y = pts[(i + 1) % pts.size()];
        benchmark::DoNotOptimize(bowen_distance(ctx, x, y));
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BowenDistance)->Arg(1)->Arg(4)->Arg(8);

void BM_GreedyCover(benchmark::State& state) {
    System sys = zoo::doubling();
    const double delta = 0.02;
    BowenContext ctx = make_bowen_context(sys, 4.0, delta);
    Rng rng = Rng::derive(8, 0);
    std::vector<Point> cand;
    const auto n = static_cast<std::size_t>(state.range(0));
    for (std::size_t i = 0; i < n; ++i)
        cand.push_back(sys.space.make_point({rng.uniform01()}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(greedy_bisep(ctx, cand, delta));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GreedyCover)->Arg(500)->Arg(2000);

void BM_CoarseGrain(benchmark::State& state) {
    System sys = zoo::doubling();
    const double delta = 0.04;
    BowenContext ctx = make_bowen_context(sys, 3.0, delta);
    Rng rng = Rng::derive(9, 0);
    std::vector<Point> cand;
    for (int i = 0; i < 1000; ++i)
        cand.push_back(sys.space.make_point({rng.uniform01()}));
    CoverSpec cover = greedy_bisep(ctx, cand, delta);
    const auto n = static_cast<std::size_t>(state.range(0));
    ParticleMeasure nu = circle_ensemble(n, 3);
    ParticleMeasure mu = circle_ensemble(4 * n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(coarse_grain(nu, mu, cover));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoarseGrain)->Arg(1000)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
