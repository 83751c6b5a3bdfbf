#include "inof/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "inof/csv.hpp"
#include "inof/numeric.hpp"
#include "inof/parallel.hpp"

namespace inof {

namespace {

constexpr std::size_t kChunk = 1 << 14;

// Deterministic parallel reduction: fixed-size chunk partials folded in
// chunk order, so the value does not depend on the thread count.
template <typename F>
double chunked_sum(std::size_t n, std::size_t n_threads, F&& term) {
    const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(n_chunks, 0.0);
    for_each_chunk(n, kChunk, n_threads, [&](std::size_t c, std::size_t b, std::size_t e) {
        partial[c] = compensated_sum(b, e, term);
    });
    return compensated_sum(0, n_chunks, [&](std::size_t c) { return partial[c]; });
}

}  // namespace

PageRankResult compute_pagerank(const DirectedGraph& graph, double alpha, double tol,
                                std::uint32_t max_iter, std::size_t n_threads,
                                const std::vector<double>* start) {
    const std::size_t n = graph.n_nodes();
    if (n == 0) throw std::invalid_argument("pagerank: empty graph");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("pagerank: alpha must be in (0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("pagerank: tol must be positive");
    if (n_threads == 0) n_threads = default_thread_count();

    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    if (start) {
        if (start->size() != n)
            throw std::invalid_argument("pagerank: start vector size mismatch");
        const double s = chunked_sum(n, n_threads, [&](std::size_t i) { return (*start)[i]; });
        if (!(s > 0.0)) throw std::invalid_argument("pagerank: start vector must have positive mass");
        for (std::size_t i = 0; i < n; ++i) p[i] = (*start)[i] / s;
    }

    std::vector<NodeId> dangling;
    for (NodeId v = 0; v < n; ++v)
        if (graph.out_degree(v) == 0) dangling.push_back(v);

    std::vector<double> scaled(n), next(n);
    const double teleport = (1.0 - alpha) / static_cast<double>(n);

    double residual = 0.0;
    std::uint32_t iter = 0;
    for (; iter < max_iter; ++iter) {
        for_each_chunk(n, kChunk, n_threads, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                const auto deg = graph.out_degree(static_cast<NodeId>(j));
                scaled[j] = deg ? p[j] / static_cast<double>(deg) : 0.0;
            }
        });
        const double dangling_mass = chunked_sum(
            dangling.size(), n_threads, [&](std::size_t k) { return p[dangling[k]]; });
        const double base = alpha * dangling_mass / static_cast<double>(n) + teleport;

        for_each_chunk(n, kChunk, n_threads, [&](std::size_t, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                double acc = 0.0;
                for (const NodeId j : graph.in_neighbors(static_cast<NodeId>(i)))
                    acc += scaled[j];
                next[i] = alpha * acc + base;
            }
        });

        residual = chunked_sum(n, n_threads,
                               [&](std::size_t i) { return std::abs(next[i] - p[i]); });
        p.swap(next);
        if (residual < tol) {
            ++iter;
            break;
        }
    }
    if (residual >= tol)
        throw std::runtime_error("pagerank: no convergence after " + std::to_string(max_iter) +
                                 " iterations (last L1 change " + csv::format_double(residual) +
                                 ")");

    // Final renormalization pins sum(p) to 1 up to a few ulp.
    const double mass = chunked_sum(n, n_threads, [&](std::size_t i) { return p[i]; });
    for (std::size_t i = 0; i < n; ++i) p[i] /= mass;

    PageRankResult result;
    result.alpha = alpha;
    result.iterations = iter;
    result.residual = residual;

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (p[a] != p[b]) return p[a] > p[b];
        return a < b;
    });
    result.k_index.resize(n);
    for (std::size_t r = 0; r < n; ++r)
        result.k_index[order[r]] = static_cast<std::uint32_t>(r + 1);
    result.p = std::move(p);
    return result;
}

double l1_residual(const DirectedGraph& graph, double alpha, const std::vector<double>& p) {
    const std::size_t n = graph.n_nodes();
    if (p.size() != n) throw std::invalid_argument("l1_residual: size mismatch");
    double dangling_mass = 0.0, c = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        if (graph.out_degree(v) != 0) continue;
        const double y = p[v] - c;
        const double t = dangling_mass + y;
        c = (t - dangling_mass) - y;
        dangling_mass = t;
    }
    const double base =
        alpha * dangling_mass / static_cast<double>(n) + (1.0 - alpha) / static_cast<double>(n);
    double norm = 0.0, nc = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        double gp = base;
        for (const NodeId j : graph.in_neighbors(i))
            gp += alpha * p[j] / static_cast<double>(graph.out_degree(j));
        const double y = std::abs(gp - p[i]) - nc;
        const double t = norm + y;
        nc = (t - norm) - y;
        norm = t;
    }
    return norm;
}

void write_pagerank_csv(const DirectedGraph& graph, const PageRankResult& result,
                        const std::string& path) {
    const std::size_t n = graph.n_nodes();
    if (result.p.size() != n) throw std::invalid_argument("pagerank csv: size mismatch");
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return result.k_index[a] < result.k_index[b]; });

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "node_id,title,p,k_index\n";
    for (const NodeId v : order) {
        out << v << ',' << csv::escape(graph.title(v)) << ',' << csv::format_double(result.p[v])
            << ',' << result.k_index[v] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace inof
