// Copyright (c) ckgraph contributors.
// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <benchmark/benchmark.h>

#include <ckgraph/ck_verifier.hpp>
#include <ckgraph/desingularize.hpp>
#include <ckgraph/fuzz.hpp>
#include <ckgraph/generate.hpp>
#include <ckgraph/ideal_lattice.hpp>
#include <ckgraph/invariants.hpp>
#include <ckgraph/prim_spectrum.hpp>

using namespace ckgraph;

namespace {

std::vector<Graph> graphs(std::size_t max_vertices, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    GeneratorConfig cfg;
    cfg.min_vertices = max_vertices;
    cfg.max_vertices = max_vertices;
    std::vector<Graph> out;
    while (out.size() < count) {
        out.push_back(random_graph(rng, cfg));
    }
    return out;
}

void BM_FullReport(benchmark::State& state) {
    const auto gs = graphs(static_cast<std::size_t>(state.range(0)), 64, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(full_report(gs[i++ % gs.size()]));
    }
}
BENCHMARK(BM_FullReport)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_FConditions(benchmark::State& state) {
    const auto gs = graphs(static_cast<std::size_t>(state.range(0)), 64, 2);
    std::vector<DesingularizedGraph> ds;
    for (const auto& g : gs) {
        ds.push_back(desingularize(g));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& d = ds[i++ % ds.size()];
        benchmark::DoNotOptimize(condition_L_F(d));
        benchmark::DoNotOptimize(condition_K_F(d));
        benchmark::DoNotOptimize(cofinal_F(d));
    }
}
BENCHMARK(BM_FConditions)->Arg(4)->Arg(8)->Arg(16);

void BM_Truncate(benchmark::State& state) {
    const auto d = desingularize(graphs(8, 1, 3).front());
    for (auto _ : state) {
        benchmark::DoNotOptimize(truncate(d, static_cast<std::uint64_t>(state.range(0))));
    }
}
BENCHMARK(BM_Truncate)->Arg(8)->Arg(32)->Arg(128);

void BM_EnumeratePairs(benchmark::State& state) {
    const auto gs = graphs(static_cast<std::size_t>(state.range(0)), 32, 4);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_pairs(gs[i++ % gs.size()]));
    }
}
BENCHMARK(BM_EnumeratePairs)->Arg(4)->Arg(8)->Arg(12);

void BM_LatticeIso(benchmark::State& state) {
    std::vector<DesingularizedGraph> ds;
    for (const auto& g : graphs(static_cast<std::size_t>(state.range(0)), 16, 5)) {
        ds.push_back(desingularize(g));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_lattice_iso(ds[i++ % ds.size()]));
    }
}
BENCHMARK(BM_LatticeIso)->Arg(3)->Arg(5);

void BM_PrimSpace(benchmark::State& state) {
    std::vector<Graph> ks;
    for (const auto& g : graphs(static_cast<std::size_t>(state.range(0)), 256, 6)) {
        if (condition_K(g).value && enumerate_xi(g).size() <= 12) {
            ks.push_back(g);
        }
    }
    std::size_t i = 0;
    for (auto _ : state) {
        const PrimSpace space(ks[i++ % ks.size()]);
        benchmark::DoNotOptimize(check_kuratowski(space));
    }
}
BENCHMARK(BM_PrimSpace)->Arg(3)->Arg(5);

void BM_ExtendToF(benchmark::State& state) {
    const Graph g({"v0", "a", "x"}, {BundleSpec{0, 1, Multiplicity::omega(), ""}, BundleSpec{1, 2, Multiplicity::finite(2), ""},
                                     BundleSpec{0, 2, Multiplicity::omega(), ""}});
    const auto d = desingularize(g);
    const auto m = static_cast<std::uint64_t>(state.range(0));
    const auto fam = build_standin_family(g, m + 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extend_to_F(fam, d, m));
    }
}
BENCHMARK(BM_ExtendToF)->Arg(2)->Arg(3)->Arg(5);

void BM_Fuzz(benchmark::State& state) {
    FuzzConfig cfg;
    cfg.cases = static_cast<std::uint64_t>(state.range(0));
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_fuzz(cfg));
    }
}
BENCHMARK(BM_Fuzz)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
