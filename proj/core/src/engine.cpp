#include "inof/engine.hpp"

#include <atomic>
#include <cassert>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

#include "inof/parallel.hpp"
#include "inof/rng.hpp"

namespace inof {

SpinState SpinState::white_start(std::size_t n_nodes, std::span<const NodeId> red_nodes,
                                 std::span<const NodeId> blue_nodes) {
    SpinState state;
    state.sigma.assign(n_nodes, 0);
    state.fixed.assign(n_nodes, 0);
    for (const NodeId v : red_nodes) {
        if (v >= n_nodes)
            throw std::invalid_argument("red node id " + std::to_string(v) + " out of range");
        state.sigma[v] = 1;
        state.fixed[v] = 1;
    }
    for (const NodeId v : blue_nodes) {
        if (v >= n_nodes)
            throw std::invalid_argument("blue node id " + std::to_string(v) + " out of range");
        if (state.fixed[v] && state.sigma[v] == 1)
            throw std::invalid_argument("node " + std::to_string(v) +
                                        " appears in both fixed groups");
        state.sigma[v] = -1;
        state.fixed[v] = 1;
    }
    return state;
}

void ExperimentConfig::validate(std::size_t n_nodes) const {
    if (red_nodes.empty() && blue_nodes.empty())
        throw std::invalid_argument("config: at least one fixed group must be non-empty");
    std::unordered_set<NodeId> reds;
    for (const NodeId v : red_nodes) {
        if (v >= n_nodes)
            throw std::invalid_argument("config: red node id " + std::to_string(v) +
                                        " out of range");
        reds.insert(v);
    }
    for (const NodeId v : blue_nodes) {
        if (v >= n_nodes)
            throw std::invalid_argument("config: blue node id " + std::to_string(v) +
                                        " out of range");
        if (reds.count(v))
            throw std::invalid_argument("config: node " + std::to_string(v) +
                                        " appears in both fixed groups");
    }
    if (tau_max == 0) throw std::invalid_argument("config: tau_max must be >= 1");
    if (n_realizations == 0) throw std::invalid_argument("config: n_realizations must be >= 1");
    if (n_slots == 0) throw std::invalid_argument("config: n_slots must be >= 1");
    if (!(positive_threshold >= 0.0))
        throw std::invalid_argument("config: positive_threshold must be >= 0");
}

double influence_score(const DirectedGraph& graph, const std::vector<std::int8_t>& sigma,
                       NodeId i, MatrixMode mode) {
    if (mode == MatrixMode::adjacency) {
        std::int64_t z = 0;
        for (const NodeId j : graph.in_neighbors(i)) z += sigma[j];
        return static_cast<double>(z);
    }
    double z = 0.0;
    for (const NodeId j : graph.in_neighbors(i)) {
        if (sigma[j] == 0) continue;
        z += static_cast<double>(sigma[j]) / static_cast<double>(graph.out_degree(j));
    }
    return z;
}

std::uint64_t sweep(const DirectedGraph& graph, SpinState& state,
                    std::span<const NodeId> permutation, MatrixMode mode,
                    double positive_threshold) {
    std::uint64_t flips = 0;
    auto& sigma = state.sigma;
    if (mode == MatrixMode::adjacency) {
        for (const NodeId i : permutation) {
            if (state.fixed[i])
                throw std::logic_error("sweep: permutation contains fixed node " +
                                       std::to_string(i));
            std::int64_t z = 0;
            for (const NodeId j : graph.in_neighbors(i)) z += sigma[j];
            const std::int8_t old = sigma[i];
            std::int8_t next = old;
            if (static_cast<double>(z) > positive_threshold)
                next = 1;
            else if (z < 0)
                next = -1;
            if (next != old) {
                sigma[i] = next;
                ++flips;
            }
        }
        return flips;
    }
    for (const NodeId i : permutation) {
        if (state.fixed[i])
            throw std::logic_error("sweep: permutation contains fixed node " + std::to_string(i));
        double z = 0.0;
        for (const NodeId j : graph.in_neighbors(i)) {
            if (sigma[j] == 0) continue;
            z += static_cast<double>(sigma[j]) / static_cast<double>(graph.out_degree(j));
        }
        const std::int8_t old = sigma[i];
        std::int8_t next = old;
        if (z > positive_threshold)
            next = 1;
        else if (z < 0.0)
            next = -1;
        if (next != old) {
            sigma[i] = next;
            ++flips;
        }
    }
    return flips;
}

RealizationResult run_realization(const DirectedGraph& graph, const ExperimentConfig& config,
                                  std::uint32_t slot_index, std::uint32_t realization_index) {
    const std::size_t n = graph.n_nodes();
    config.validate(n);

    SpinState state = SpinState::white_start(n, config.red_nodes, config.blue_nodes);
    std::vector<NodeId> permutation;
    permutation.reserve(n);
    for (NodeId v = 0; v < n; ++v)
        if (!state.fixed[v]) permutation.push_back(v);

    const std::uint64_t seed = derive_seed(config.master_seed, slot_index, realization_index);
    SplitMix64 rng(seed);

    std::uint32_t sweeps_run = 0;
    for (std::uint32_t t = 0; t < config.tau_max; ++t) {
        shuffle(permutation, rng);
        const std::uint64_t flips =
            sweep(graph, state, permutation, config.matrix_mode, config.positive_threshold);
        ++sweeps_run;
#ifndef NDEBUG
        for (const NodeId v : config.red_nodes) assert(state.sigma[v] == 1);
        for (const NodeId v : config.blue_nodes) assert(state.sigma[v] == -1);
#endif
        if (config.early_stop && flips == 0) break;
    }

    RealizationResult result;
    result.seed = seed;
    result.sweeps_run = sweeps_run;
    for (const std::int8_t s : state.sigma) {
        if (s > 0)
            ++result.n_red;
        else if (s < 0)
            ++result.n_blue;
        else
            ++result.n_white;
    }
    const std::uint64_t colored =
        static_cast<std::uint64_t>(result.n_red) + static_cast<std::uint64_t>(result.n_blue);
    if (colored == 0)
        throw std::logic_error("run_realization: no colored nodes at steady state");
    result.f_r = static_cast<double>(result.n_red) / static_cast<double>(colored);
    result.f_b = 1.0 - result.f_r;
    result.final_sigma = std::move(state.sigma);
    return result;
}

void run_slot(const DirectedGraph& graph, const ExperimentConfig& config,
              std::uint32_t slot_index, std::size_t n_threads, const RealizationSink& sink) {
    config.validate(graph.n_nodes());
    if (!sink) throw std::invalid_argument("run_slot: sink must be callable");
    if (n_threads == 0) n_threads = default_thread_count();

    if (n_threads <= 1 || config.n_realizations == 1) {
        for (std::uint32_t r = 0; r < config.n_realizations; ++r)
            sink(r, run_realization(graph, config, slot_index, r));
        return;
    }

    std::atomic<std::uint32_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex sink_mutex;
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::uint32_t r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= config.n_realizations || failed.load(std::memory_order_relaxed)) return;
            try {
                RealizationResult result = run_realization(graph, config, slot_index, r);
                const std::lock_guard<std::mutex> lock(sink_mutex);
                sink(r, result);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const std::size_t spawn =
        std::min<std::size_t>(n_threads, config.n_realizations) - 1;
    std::vector<std::thread> pool;
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace inof
