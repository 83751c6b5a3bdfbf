#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inof/graph.hpp"

namespace inof {

struct PageRankResult {
    std::vector<double> p;               // probability per node, sums to 1
    std::vector<std::uint32_t> k_index;  // rank per node, 1 = largest p
    double alpha = 0.85;
    std::uint32_t iterations = 0;
    double residual = 0;                 // final L1 change between iterates
};

// Matrix-free power iteration on G = alpha*S + (1-alpha)/N, with dangling
// columns completed to 1/N (their mass is folded in as a scalar each
// iteration). Starts from the uniform vector (or `start`, normalized) and
// stops when the L1 change drops below tol. Ranks tie-break by ascending
// node id. Throws on an empty graph, alpha outside (0,1), or
// non-convergence within max_iter (message carries the last residual).
//
// Reductions fold fixed-size chunk partials in chunk order, so the result
// is bit-identical for every n_threads (0 = default_thread_count()).
PageRankResult compute_pagerank(const DirectedGraph& graph, double alpha = 0.85,
                                double tol = 1e-12, std::uint32_t max_iter = 1000,
                                std::size_t n_threads = 1,
                                const std::vector<double>* start = nullptr);

// One straightforward multiply, written independently of the iteration
// loop: returns ||G p - p||_1 for verifying a converged vector.
double l1_residual(const DirectedGraph& graph, double alpha, const std::vector<double>& p);

// CSV rows "node_id,title,p,k_index", one per node, in rank order (K = 1
// first).
void write_pagerank_csv(const DirectedGraph& graph, const PageRankResult& result,
                        const std::string& path);

}  // namespace inof
