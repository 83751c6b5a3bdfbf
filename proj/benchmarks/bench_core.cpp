// Microbenchmarks for the hot paths: spin sweeps, whole realizations,
// the ranking iteration, BFS, and the permutation generator.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "inof/distance.hpp"
#include "inof/engine.hpp"
#include "inof/graph.hpp"
#include "inof/pagerank.hpp"
#include "inof/rng.hpp"

namespace {

using inof::DirectedGraph;
using inof::NodeId;

// Endpoint-urn preferential attachment with reciprocal edges: a small-world,
// heavy-tailed digraph shaped like the simulation workloads.
DirectedGraph scale_free_graph(NodeId n, std::uint32_t m, std::uint64_t seed) {
    inof::SplitMix64 rng(seed);
    std::vector<inof::Edge> edges;
    std::vector<NodeId> urn;
    const NodeId clique = m + 1;
    for (NodeId a = 0; a < clique; ++a)
        for (NodeId b = 0; b < clique; ++b)
            if (a != b) {
                edges.emplace_back(a, b);
                urn.push_back(b);
            }
    for (NodeId v = clique; v < n; ++v) {
        std::uint32_t made = 0;
        while (made < m) {
            const NodeId target = urn[rng.next_below(urn.size())];
            if (target == v) continue;
            edges.emplace_back(v, target);
            urn.push_back(target);
            urn.push_back(v);
            ++made;
            if (rng.next_double() < 0.5) edges.emplace_back(target, v);
        }
    }
    return DirectedGraph::from_edges(n, std::move(edges));
}

const DirectedGraph& bench_graph() {
    static const DirectedGraph g = scale_free_graph(10000, 4, 99);
    return g;
}

void bm_sweep(benchmark::State& state) {
    const auto& g = bench_graph();
    auto spins = inof::SpinState::white_start(g.n_nodes(), std::vector<NodeId>{0, 1},
                                              std::vector<NodeId>{2, 3});
    std::vector<NodeId> perm;
    for (NodeId v = 0; v < g.n_nodes(); ++v)
        if (!spins.fixed[v]) perm.push_back(v);

    const auto mode = state.range(0) == 0 ? inof::MatrixMode::adjacency
                                          : inof::MatrixMode::stochastic;
    for (auto _ : state) {
        auto flips = inof::sweep(g, spins, perm, mode);
        benchmark::DoNotOptimize(flips);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(perm.size()));
}
BENCHMARK(bm_sweep)->Arg(0)->Arg(1)->ArgNames({"mode"});

void bm_realization(benchmark::State& state) {
    const auto& g = bench_graph();
    inof::ExperimentConfig cfg;
    cfg.red_nodes = {0, 1};
    cfg.blue_nodes = {2, 3};
    cfg.tau_max = 20;
    cfg.early_stop = state.range(0) != 0;

    std::uint32_t index = 0;
    for (auto _ : state) {
        auto result = inof::run_realization(g, cfg, 0, index++);
        benchmark::DoNotOptimize(result.f_r);
    }
}
BENCHMARK(bm_realization)->Arg(0)->Arg(1)->ArgNames({"early_stop"});

void bm_pagerank(benchmark::State& state) {
    const auto& g = bench_graph();
    for (auto _ : state) {
        auto result = inof::compute_pagerank(g, 0.85, 1e-10, 1000,
                                             static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(result.p.data());
    }
}
BENCHMARK(bm_pagerank)->Arg(1)->Arg(4)->ArgNames({"threads"})
    ->Unit(benchmark::kMillisecond);

void bm_bfs(benchmark::State& state) {
    const auto& g = bench_graph();
    const std::vector<NodeId> group = {0, 1};
    for (auto _ : state) {
        auto d = inof::bfs_from_group(g, group, inof::BfsDirection::forward);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.n_nodes()));
}
BENCHMARK(bm_bfs);

void bm_shuffle(benchmark::State& state) {
    std::vector<NodeId> items(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < items.size(); ++i) items[i] = static_cast<NodeId>(i);
    inof::SplitMix64 rng(7);
    for (auto _ : state) {
        inof::shuffle(items, rng);
        benchmark::DoNotOptimize(items.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_shuffle)->Arg(1000)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
