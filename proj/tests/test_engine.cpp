#include <cstring>
#include <map>
#include <mutex>
#include <vector>

#include "doctest.h"
#include "inof/engine.hpp"
#include "inof/graph.hpp"
#include "support.hpp"

using inof::DirectedGraph;
using inof::ExperimentConfig;
using inof::MatrixMode;
using inof::NodeId;
using inof::RealizationResult;
using inof::SpinState;

namespace {

// 0 -> {1..n-1}: one fixed hub reaches everything in a single hop.
DirectedGraph hub_graph(NodeId n) {
    std::vector<inof::Edge> edges;
    for (NodeId i = 1; i < n; ++i) edges.emplace_back(0, i);
    return DirectedGraph::from_edges(n, std::move(edges));
}

ExperimentConfig basic_config(std::vector<NodeId> red, std::vector<NodeId> blue) {
    ExperimentConfig cfg;
    cfg.red_nodes = std::move(red);
    cfg.blue_nodes = std::move(blue);
    cfg.tau_max = 20;
    cfg.n_realizations = 1;
    cfg.master_seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("white_start colors the groups and fixes them") {
    std::vector<NodeId> red = {0, 2}, blue = {4};
    auto s = SpinState::white_start(6, red, blue);
    CHECK(s.sigma == std::vector<std::int8_t>{1, 0, 1, 0, -1, 0});
    CHECK(s.fixed == std::vector<std::uint8_t>{1, 0, 1, 0, 1, 0});
}

TEST_CASE("white_start rejects bad groups") {
    std::vector<NodeId> red = {0}, blue = {0};
    CHECK_THROWS_AS(SpinState::white_start(3, red, blue), std::invalid_argument);
    std::vector<NodeId> high = {5};
    CHECK_THROWS_AS(SpinState::white_start(3, high, {}), std::invalid_argument);
}

TEST_CASE("config validation enforces the group invariants") {
    auto cfg = basic_config({0}, {1});
    cfg.validate(4);  // fine

    auto both_empty = basic_config({}, {});
    CHECK_THROWS_AS(both_empty.validate(4), std::invalid_argument);

    auto overlap = basic_config({0, 1}, {1});
    CHECK_THROWS_AS(overlap.validate(4), std::invalid_argument);

    auto out_of_range = basic_config({9}, {1});
    CHECK_THROWS_AS(out_of_range.validate(4), std::invalid_argument);

    auto zero_tau = basic_config({0}, {1});
    zero_tau.tau_max = 0;
    CHECK_THROWS_AS(zero_tau.validate(4), std::invalid_argument);

    auto one_sided = basic_config({0}, {});
    one_sided.validate(4);  // a single fixed group is allowed
}

TEST_CASE("influence_score sums raw spins in adjacency mode") {
    // 0 -> 2, 1 -> 2, 3 -> 2: three in-neighbors for node 2.
    auto g = DirectedGraph::from_edges(4, {{0, 2}, {1, 2}, {3, 2}});
    std::vector<std::int8_t> sigma = {1, 1, 0, -1};
    CHECK(inof::influence_score(g, sigma, 2, MatrixMode::adjacency) == 1.0);
    sigma[1] = -1;
    CHECK(inof::influence_score(g, sigma, 2, MatrixMode::adjacency) == -1.0);
    CHECK(inof::influence_score(g, sigma, 0, MatrixMode::adjacency) == 0.0);
}

TEST_CASE("influence_score divides by out-degree in stochastic mode") {
    // 0 -> 1, 0 -> 2, 0 -> 3 (k_0 = 3) and 4 -> 1 (k_4 = 1).
    auto g = DirectedGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {4, 1}});
    std::vector<std::int8_t> sigma = {1, 0, 0, 0, -1};
    CHECK(inof::influence_score(g, sigma, 1, MatrixMode::stochastic) ==
          doctest::Approx(1.0 / 3.0 - 1.0).epsilon(1e-15));
    CHECK(inof::influence_score(g, sigma, 2, MatrixMode::stochastic) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("sweep applies the threshold rule in visit order") {
    auto g = hub_graph(4);
    auto s = SpinState::white_start(4, std::vector<NodeId>{0}, {});
    std::vector<NodeId> perm = {1, 2, 3};
    const auto flips = inof::sweep(g, s, perm, MatrixMode::adjacency);
    CHECK(flips == 3);
    CHECK(s.sigma == std::vector<std::int8_t>{1, 1, 1, 1});

    // Second sweep is quiescent.
    CHECK(inof::sweep(g, s, perm, MatrixMode::adjacency) == 0);
}

TEST_CASE("sweep respects a positive threshold of one") {
    // Node 1 sees exactly one red in-neighbor: Z = 1.
    auto g = DirectedGraph::from_edges(2, {{0, 1}});
    std::vector<NodeId> perm = {1};

    auto s = SpinState::white_start(2, std::vector<NodeId>{0}, {});
    inof::sweep(g, s, perm, MatrixMode::adjacency, /*positive_threshold=*/1.0);
    CHECK(s.sigma[1] == 0);  // Z = 1 is not > 1

    inof::sweep(g, s, perm, MatrixMode::adjacency, /*positive_threshold=*/0.0);
    CHECK(s.sigma[1] == 1);
}

TEST_CASE("sweep leaves exact cancellations white") {
    // Node 2 sees one red and one blue: Z = 0 under both modes (equal degrees).
    auto g = DirectedGraph::from_edges(3, {{0, 2}, {1, 2}});
    auto s = SpinState::white_start(3, std::vector<NodeId>{0}, std::vector<NodeId>{1});
    std::vector<NodeId> perm = {2};
    for (int pass = 0; pass < 5; ++pass) inof::sweep(g, s, perm, MatrixMode::adjacency);
    CHECK(s.sigma[2] == 0);
    for (int pass = 0; pass < 5; ++pass) inof::sweep(g, s, perm, MatrixMode::stochastic);
    CHECK(s.sigma[2] == 0);
}

TEST_CASE("sweep rejects fixed nodes in the permutation") {
    auto g = hub_graph(3);
    auto s = SpinState::white_start(3, std::vector<NodeId>{0}, {});
    std::vector<NodeId> perm = {0, 1};
    CHECK_THROWS_AS(inof::sweep(g, s, perm, MatrixMode::adjacency), std::logic_error);
}

TEST_CASE("negative scores turn nodes blue") {
    auto g = hub_graph(4);
    auto s = SpinState::white_start(4, {}, std::vector<NodeId>{0});
    std::vector<NodeId> perm = {1, 2, 3};
    inof::sweep(g, s, perm, MatrixMode::adjacency);
    CHECK(s.sigma == std::vector<std::int8_t>{-1, -1, -1, -1});
}

TEST_CASE("a lone red hub saturates every realization") {
    auto g = hub_graph(50);
    auto cfg = basic_config({0}, {});
    for (std::uint32_t r = 0; r < 8; ++r) {
        auto result = inof::run_realization(g, cfg, 0, r);
        CHECK(result.f_r == 1.0);
        CHECK(result.n_white == 0);
        CHECK(result.n_red == 50);
        CHECK(result.mu() == 1.0);
        CHECK(result.f_r + result.f_b == 1.0);
    }
}

TEST_CASE("realizations are deterministic in (master, slot, index)") {
    auto g = testsupport::gnp_digraph(120, 0.03, 3);
    auto cfg = basic_config({0, 1}, {2, 3});
    cfg.master_seed = 99;

    auto a = inof::run_realization(g, cfg, 2, 17);
    auto b = inof::run_realization(g, cfg, 2, 17);
    CHECK(a.final_sigma == b.final_sigma);
    CHECK(a.f_r == b.f_r);
    CHECK(a.seed == b.seed);
    CHECK(a.sweeps_run == b.sweeps_run);

    auto c = inof::run_realization(g, cfg, 2, 18);
    CHECK(a.seed != c.seed);

    auto d = inof::run_realization(g, cfg, 3, 17);
    CHECK(a.seed != d.seed);
}

TEST_CASE("fixed nodes never change and counts partition the graph") {
    auto g = testsupport::gnp_digraph(200, 0.02, 13);
    auto cfg = basic_config({5, 6}, {7, 8});
    cfg.tau_max = 20;
    for (std::uint32_t r = 0; r < 10; ++r) {
        auto result = inof::run_realization(g, cfg, 0, r);
        CHECK(result.final_sigma[5] == 1);
        CHECK(result.final_sigma[6] == 1);
        CHECK(result.final_sigma[7] == -1);
        CHECK(result.final_sigma[8] == -1);
        CHECK(result.n_red + result.n_blue + result.n_white == 200);
        CHECK(result.n_red >= 2);
        CHECK(result.n_blue >= 2);
        const double colored = result.n_red + result.n_blue;
        CHECK(result.f_r == static_cast<double>(result.n_red) / colored);
        CHECK(result.f_b == 1.0 - result.f_r);
        CHECK(result.mu() == 2.0 * result.f_r - 1.0);
    }
}

TEST_CASE("nodes unreachable from both groups stay white") {
    // 0 (red) -> 1 -> 2, blue 3 -> 4; node 5 isolated, 6 -> 0 upstream only.
    auto g = DirectedGraph::from_edges(7, {{0, 1}, {1, 2}, {3, 4}, {6, 0}});
    auto cfg = basic_config({0}, {3});
    cfg.n_realizations = 1;
    for (std::uint32_t r = 0; r < 6; ++r) {
        auto result = inof::run_realization(g, cfg, 0, r);
        CHECK(result.final_sigma[5] == 0);
        CHECK(result.final_sigma[6] == 0);
        CHECK(result.final_sigma[1] == 1);
        CHECK(result.final_sigma[2] == 1);
        CHECK(result.final_sigma[4] == -1);
    }
}

TEST_CASE("early_stop preserves the final state bit for bit") {
    auto g = testsupport::gnp_digraph(150, 0.03, 21);
    auto base = basic_config({0, 1}, {2, 3});
    base.tau_max = 30;
    auto stopping = base;
    stopping.early_stop = true;

    for (std::uint32_t r = 0; r < 12; ++r) {
        auto full = inof::run_realization(g, base, 0, r);
        auto cut = inof::run_realization(g, stopping, 0, r);
        CHECK(full.final_sigma == cut.final_sigma);
        CHECK(full.f_r == cut.f_r);
        CHECK(full.n_white == cut.n_white);
        CHECK(cut.sweeps_run <= full.sweeps_run);
    }
}

TEST_CASE("early_stop ends a saturated run quickly") {
    auto g = hub_graph(10);
    auto cfg = basic_config({0}, {});
    cfg.tau_max = 1000;
    cfg.early_stop = true;
    auto result = inof::run_realization(g, cfg, 0, 0);
    // Sweep 1 colors everything, sweep 2 observes zero flips.
    CHECK(result.sweeps_run == 2);
    CHECK(result.f_r == 1.0);
}

TEST_CASE("run_slot covers every realization exactly once, any thread count") {
    auto g = testsupport::gnp_digraph(100, 0.03, 41);
    auto cfg = basic_config({0}, {1});
    cfg.n_realizations = 40;

    auto collect = [&](std::size_t n_threads) {
        std::map<std::uint32_t, RealizationResult> results;
        std::mutex m;
        inof::run_slot(g, cfg, 0, n_threads, [&](std::uint32_t idx, const RealizationResult& r) {
            std::lock_guard<std::mutex> lock(m);
            REQUIRE(results.emplace(idx, r).second);
        });
        return results;
    };

    auto serial = collect(1);
    auto parallel = collect(4);
    REQUIRE(serial.size() == 40);
    REQUIRE(parallel.size() == 40);
    for (std::uint32_t i = 0; i < 40; ++i) {
        CHECK(serial.at(i).final_sigma == parallel.at(i).final_sigma);
        CHECK(serial.at(i).f_r == parallel.at(i).f_r);
        CHECK(serial.at(i).seed == parallel.at(i).seed);
    }
}

TEST_CASE("run_slot propagates sink exceptions") {
    auto g = hub_graph(5);
    auto cfg = basic_config({0}, {});
    cfg.n_realizations = 8;
    CHECK_THROWS_AS(
        inof::run_slot(g, cfg, 0, 2,
                       [](std::uint32_t idx, const RealizationResult&) {
                           if (idx == 3) throw std::runtime_error("sink failure");
                       }),
        std::runtime_error);
}

TEST_CASE("stochastic and adjacency modes genuinely differ") {
    // Red node 0 fans out to 1,2,3 (weight 1/3 each); blue node 4 points only
    // at 1 (weight 1). Under stochastic weighting node 1 sees 1/3 - 1 < 0 and
    // turns blue; under adjacency it sees 1 - 1 = 0 and stays white.
    auto g = DirectedGraph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {4, 1}});
    std::vector<NodeId> perm = {1};

    auto s_adj = SpinState::white_start(5, std::vector<NodeId>{0}, std::vector<NodeId>{4});
    inof::sweep(g, s_adj, perm, MatrixMode::adjacency);
    CHECK(s_adj.sigma[1] == 0);

    auto s_sto = SpinState::white_start(5, std::vector<NodeId>{0}, std::vector<NodeId>{4});
    inof::sweep(g, s_sto, perm, MatrixMode::stochastic);
    CHECK(s_sto.sigma[1] == -1);
}
