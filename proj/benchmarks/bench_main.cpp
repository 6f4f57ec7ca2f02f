#include <benchmark/benchmark.h>

#include <echograph/backbone.hpp>
#include <echograph/bipartite.hpp>
#include <echograph/community.hpp>
#include <echograph/rng.hpp>
#include <echograph/statfit.hpp>
#include <echograph/synth.hpp>

#include <cstdio>
#include <string>
#include <vector>

using namespace echograph;

namespace {

SynthConfig scaled_config(int pages_per_block, int users_per_block) {
    SynthConfig cfg;
    cfg.n_pages_per_block = pages_per_block;
    cfg.n_users_per_block = users_per_block;
    cfg.seed = 7;
    return cfg;
}

BipartiteGraph bipartite_fixture(int pages_per_block, int users_per_block) {
    const auto synth = generate(scaled_config(pages_per_block, users_per_block));
    return build_bipartite(filter_engaged(synth.dataset), KindFilter::like);
}

WeightedGraph projection_fixture(int pages_per_block, int users_per_block) {
    return project(bipartite_fixture(pages_per_block, users_per_block), Side::left);
}

void bm_projection(benchmark::State& state) {
    const auto b = bipartite_fixture(static_cast<int>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(project(b, Side::left));
}

void bm_disparity_filter(benchmark::State& state) {
    const auto g = projection_fixture(static_cast<int>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(disparity_filter(g, 0.05, BackboneRule::any));
}

void bm_fast_greedy(benchmark::State& state) {
    const auto g = projection_fixture(static_cast<int>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(fast_greedy(g));
}

void bm_multilevel(benchmark::State& state) {
    const auto g = projection_fixture(static_cast<int>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(multilevel(g, 42));
}

void bm_walktrap(benchmark::State& state) {
    const auto g = projection_fixture(static_cast<int>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(walktrap(g));
}

void bm_label_propagation(benchmark::State& state) {
    const auto g = projection_fixture(static_cast<int>(state.range(0)), 400);
    for (auto _ : state) benchmark::DoNotOptimize(label_propagation(g, 42));
}

void bm_ks_two_sample(benchmark::State& state) {
    Rng rng(11);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> s1, s2;
    for (std::size_t i = 0; i < n; ++i) {
        s1.push_back(rng.normal());
        s2.push_back(rng.normal());
    }
    for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(s1, s2));
}

void bm_synth_generate(benchmark::State& state) {
    const auto cfg = scaled_config(4, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(generate(cfg));
}

} // namespace

BENCHMARK(bm_projection)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(bm_disparity_filter)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(bm_fast_greedy)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(bm_multilevel)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(bm_walktrap)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(bm_label_propagation)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(bm_ks_two_sample)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(bm_synth_generate)->Arg(100)->Arg(400);

BENCHMARK_MAIN();
