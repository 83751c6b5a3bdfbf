// Shared fixtures and independent reference implementations for the tests.
// Reference code here is deliberately written from definitions, not by
// calling the library under test.
#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "inof/graph.hpp"
#include "inof/rng.hpp"

namespace testsupport {

// Scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("inof_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str(const std::string& leaf = {}) const {
        return leaf.empty() ? path.string() : (path / leaf).string();
    }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write: " + path);
}

using inof::DirectedGraph;
using inof::Edge;
using inof::NodeId;

inline DirectedGraph make_graph(std::size_t n, std::vector<Edge> edges,
                                std::vector<std::string> titles = {}) {
    return DirectedGraph::from_edges(n, std::move(edges), std::move(titles));
}

// Erdos-Renyi digraph: each ordered pair (i, j), i != j, independently kept
// with probability p.
inline DirectedGraph gnp_digraph(std::size_t n, double p, std::uint64_t seed) {
    inof::SplitMix64 rng(seed);
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (i != j && rng.next_double() < p) edges.push_back({i, j});
    return DirectedGraph::from_edges(n, std::move(edges));
}

// Directed preferential-attachment graph. Starts from a bidirectional seed
// clique; each new node sends m out-edges to targets drawn proportionally to
// current degree (endpoint-list sampling), and each new edge is reciprocated
// with probability reciprocal_p, which gives the directed graph a strongly
// connected core like a hyperlink network.
inline DirectedGraph pa_digraph(std::size_t n, std::size_t m, double reciprocal_p,
                                std::uint64_t seed) {
    if (n < m + 1) throw std::invalid_argument("pa_digraph: n too small");
    inof::SplitMix64 rng(seed);
    std::vector<Edge> edges;
    std::vector<NodeId> endpoints;  // one entry per edge endpoint: degree-proportional urn
    const std::size_t clique = m + 1;
    for (NodeId i = 0; i < clique; ++i) {
        for (NodeId j = 0; j < clique; ++j) {
            if (i == j) continue;
            edges.push_back({i, j});
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    for (NodeId v = static_cast<NodeId>(clique); v < n; ++v) {
        std::size_t made = 0;
        while (made < m) {
            const NodeId target = endpoints[rng.next_below(endpoints.size())];
            if (target == v) continue;  // resample instead of a self-loop
            edges.push_back({v, target});
            endpoints.push_back(v);
            endpoints.push_back(target);
            if (rng.next_double() < reciprocal_p) {
                edges.push_back({target, v});
                endpoints.push_back(target);
                endpoints.push_back(v);
            }
            ++made;
        }
    }
    return DirectedGraph::from_edges(n, std::move(edges));
}

// Two-sample Kolmogorov-Smirnov statistic D = sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    return d;
}

// KS acceptance threshold at significance alpha: c(alpha) * sqrt((n+m)/(n*m)),
// with c(0.01) = 1.6276.
inline double ks_threshold_alpha01(std::size_t n, std::size_t m) {
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return 1.6276 * std::sqrt((nn + mm) / (nn * mm));
}

// Dense reference: full Google matrix times a vector, no sparsity tricks.
inline std::vector<double> dense_google_multiply(const DirectedGraph& g, double alpha,
                                                 const std::vector<double>& p) {
    const std::size_t n = g.n_nodes();
    std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
    for (NodeId j = 0; j < n; ++j) {
        const auto out = g.out_neighbors(j);
        for (NodeId i = 0; i < n; ++i) {
            double s = 0.0;
            if (out.empty()) {
                s = 1.0 / static_cast<double>(n);
            } else {
                for (const NodeId t : out)
                    if (t == i) s += 1.0;
                s /= static_cast<double>(out.size());
            }
            G[i][j] = alpha * s + (1.0 - alpha) / static_cast<double>(n);
        }
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += G[i][j] * p[j];
    return out;
}

// O(n^2) Kendall tau-b straight from the pair definition.
inline double kendall_brute(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::int64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0 && dy == 0.0) {
                ++ties_x;
                ++ties_y;
            } else if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const auto n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                         std::sqrt(static_cast<double>(n0 - ties_y));
    return static_cast<double>(concordant - discordant) / denom;
}

// O(n^2) Spearman with average ranks, written from the rank definition.
inline double spearman_brute(std::span<const double> x, std::span<const double> y) {
    const auto rank_of = [](std::span<const double> v) {
        const std::size_t n = v.size();
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t below = 0, equal = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j] < v[i]) ++below;
                if (v[j] == v[i]) ++equal;
            }
            r[i] = static_cast<double>(below) + 0.5 * static_cast<double>(equal + 1);
        }
        return r;
    };
    const std::vector<double> rx = rank_of(x);
    const std::vector<double> ry = rank_of(y);
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
        sxy += (rx[i] - mx) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace testsupport
