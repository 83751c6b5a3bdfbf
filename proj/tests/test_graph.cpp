#include <string>
#include <vector>

#include "doctest.h"
#include "inof/graph.hpp"
#include "support.hpp"

using inof::DirectedGraph;
using inof::Edge;
using inof::NodeId;
using testsupport::TempDir;
using testsupport::write_file;

TEST_CASE("from_edges drops self-loops and merges duplicates") {
    inof::LoadReport report;
    auto g = DirectedGraph::from_edges(
        4, {{0, 1}, {1, 2}, {0, 1}, {2, 2}, {1, 0}, {0, 1}}, {}, &report);

    CHECK(g.n_nodes() == 4);
    CHECK(g.n_edges() == 3);  // 0->1, 1->2, 1->0
    CHECK(report.n_self_loops_dropped == 1);
    CHECK(report.n_duplicate_edges_merged == 2);
    CHECK(report.n_dangling_nodes == 2);  // nodes 2 and 3
    CHECK(g.n_dangling() == 2);

    CHECK(g.out_degree(0) == 1);
    CHECK(g.out_degree(1) == 2);
    CHECK(g.out_degree(2) == 0);
    CHECK(g.in_degree(1) == 1);
    CHECK(g.in_degree(3) == 0);
}

TEST_CASE("neighbor rows are sorted and orientations agree") {
    auto g = DirectedGraph::from_edges(5, {{3, 1}, {3, 0}, {3, 4}, {0, 4}, {2, 4}});
    auto out3 = g.out_neighbors(3);
    CHECK(std::vector<NodeId>(out3.begin(), out3.end()) == std::vector<NodeId>{0, 1, 4});
    auto in4 = g.in_neighbors(4);
    CHECK(std::vector<NodeId>(in4.begin(), in4.end()) == std::vector<NodeId>{0, 2, 3});

    // Every out edge appears exactly once as an in edge.
    std::vector<Edge> from_out, from_in;
    for (NodeId j = 0; j < 5; ++j)
        for (NodeId i : g.out_neighbors(j)) from_out.emplace_back(j, i);
    for (NodeId i = 0; i < 5; ++i)
        for (NodeId j : g.in_neighbors(i)) from_in.emplace_back(j, i);
    std::sort(from_out.begin(), from_out.end());
    std::sort(from_in.begin(), from_in.end());
    CHECK(from_out == from_in);
}

TEST_CASE("from_edges rejects out-of-range endpoints") {
    CHECK_THROWS_AS(DirectedGraph::from_edges(3, {{0, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(DirectedGraph::from_edges(3, {{7, 0}}), std::invalid_argument);
}

TEST_CASE("fingerprint is order-invariant and content-sensitive") {
    auto a = DirectedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    auto b = DirectedGraph::from_edges(4, {{2, 3}, {0, 1}, {1, 2}});
    auto c = DirectedGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 0}});
    auto d = DirectedGraph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}});
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
    CHECK(a.fingerprint() != d.fingerprint());
}

TEST_CASE("ingest_edge_list parses ids and reports malformed lines") {
    TempDir dir("ingest");

    SUBCASE("well-formed file") {
        write_file(dir.str("edges.txt"), "0 1\n1 2\n2 0\n\n0 2\n");
        auto [g, report] = inof::ingest_edge_list(dir.str("edges.txt"));
        CHECK(g.n_nodes() == 3);
        CHECK(g.n_edges() == 4);
        CHECK(report.n_edges_kept == 4);
    }

    SUBCASE("malformed line reports its 1-based number") {
        write_file(dir.str("bad.txt"), "0 1\n1 x\n");
        try {
            inof::ingest_edge_list(dir.str("bad.txt"));
            FAIL("expected parse failure");
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    SUBCASE("missing file fails") {
        CHECK_THROWS(inof::ingest_edge_list(dir.str("nope.txt")));
    }

    SUBCASE("titles attach by line order") {
        write_file(dir.str("edges.txt"), "0 1\n1 2\n");
        write_file(dir.str("titles.txt"), "Alpha\nBeta\nGamma\n");
        auto [g, report] = inof::ingest_edge_list(dir.str("edges.txt"), dir.str("titles.txt"));
        REQUIRE(g.has_titles());
        CHECK(g.title(0) == "Alpha");
        CHECK(g.title(2) == "Gamma");
        CHECK(report.warnings.empty());
    }

    SUBCASE("title count mismatch warns but still loads") {
        write_file(dir.str("edges.txt"), "0 1\n1 2\n");
        write_file(dir.str("titles.txt"), "OnlyOne\n");
        auto [g, report] = inof::ingest_edge_list(dir.str("edges.txt"), dir.str("titles.txt"));
        CHECK(g.n_nodes() == 3);
        CHECK_FALSE(report.warnings.empty());
    }

    SUBCASE("title file larger than max id grows the graph") {
        write_file(dir.str("edges.txt"), "0 1\n");
        write_file(dir.str("titles.txt"), "A\nB\nC\nD\n");
        auto [g, report] = inof::ingest_edge_list(dir.str("edges.txt"), dir.str("titles.txt"));
        CHECK(g.n_nodes() == 4);
        CHECK(g.out_degree(3) == 0);
    }
}

TEST_CASE("binary cache round-trips exactly") {
    TempDir dir("cache");
    auto g = testsupport::gnp_digraph(200, 0.03, 7);
    std::vector<std::string> titles;
    titles.reserve(g.n_nodes());
    for (std::size_t i = 0; i < g.n_nodes(); ++i) titles.push_back("Node " + std::to_string(i));
    auto titled = DirectedGraph::from_edges(
        static_cast<NodeId>(g.n_nodes()),
        [&] {
            std::vector<Edge> edges;
            for (NodeId j = 0; j < g.n_nodes(); ++j)
                for (NodeId i : g.out_neighbors(j)) edges.emplace_back(j, i);
            return edges;
        }(),
        titles);

    const std::string path = dir.str("graph.inof");
    inof::save_binary(titled, path);
    auto loaded = inof::load_binary(path);
    CHECK(loaded == titled);
    CHECK(loaded.fingerprint() == titled.fingerprint());
    CHECK(loaded.title(137) == "Node 137");
}

TEST_CASE("binary cache round-trips the empty-title case") {
    TempDir dir("cache0");
    auto g = DirectedGraph::from_edges(3, {{0, 1}, {2, 1}});
    inof::save_binary(g, dir.str("g.inof"));
    auto loaded = inof::load_binary(dir.str("g.inof"));
    CHECK(loaded == g);
    CHECK_FALSE(loaded.has_titles());
}

TEST_CASE("load_binary rejects wrong magic and truncation") {
    TempDir dir("corrupt");

    write_file(dir.str("junk.bin"), "NOPE----------------");
    CHECK_THROWS(inof::load_binary(dir.str("junk.bin")));

    auto g = DirectedGraph::from_edges(3, {{0, 1}, {1, 2}});
    inof::save_binary(g, dir.str("g.inof"));
    std::string bytes = testsupport::read_file(dir.str("g.inof"));
    write_file(dir.str("short.inof"), bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS(inof::load_binary(dir.str("short.inof")));

    CHECK_THROWS(inof::load_binary(dir.str("missing.inof")));
}
