#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "inof/graph.hpp"

namespace inof {

// How in-neighbor spins are weighted in the influence score.
//   adjacency:  Z_i = sum of sigma_j over in-neighbors j (integer-valued).
//   stochastic: Z_i = sum of sigma_j / k_j, k_j = out-degree of j.
// adjacency is the default; stochastic is kept as a weighting variant.
enum class MatrixMode { adjacency, stochastic };

// Tri-state spin field: sigma in {-1 (blue), 0 (white), +1 (red)}.
// Fixed nodes carry their assigned spin for the whole realization.
struct SpinState {
    std::vector<std::int8_t> sigma;
    std::vector<std::uint8_t> fixed;

    // All non-fixed nodes start white. Red nodes get +1, blue -1, both fixed.
    // Throws std::invalid_argument on out-of-range ids or a node in both groups.
    static SpinState white_start(std::size_t n_nodes, std::span<const NodeId> red_nodes,
                                 std::span<const NodeId> blue_nodes);
};

struct ExperimentConfig {
    std::vector<NodeId> red_nodes;
    std::vector<NodeId> blue_nodes;
    MatrixMode matrix_mode = MatrixMode::adjacency;
    std::uint32_t tau_max = 20;
    std::uint32_t n_realizations = 1000;
    std::uint32_t n_slots = 1;
    std::uint64_t master_seed = 0;
    bool early_stop = false;
    // A node turns red when Z > positive_threshold and blue when Z < 0.
    // 0.0 is the symmetric rule; 1.0 is the stricter variant kept for
    // sensitivity checks (identical for integer Z, where Z > 0 iff Z >= 1).
    double positive_threshold = 0.0;

    // Throws std::invalid_argument unless: groups disjoint, all ids < n_nodes,
    // at least one group non-empty, tau_max/n_realizations/n_slots >= 1,
    // positive_threshold >= 0.
    void validate(std::size_t n_nodes) const;
};

struct RealizationResult {
    std::vector<std::int8_t> final_sigma;
    // Fractions over colored (non-white) nodes; f_b = 1 - f_r by construction.
    double f_r = 0.0;
    double f_b = 0.0;
    std::uint32_t n_red = 0;
    std::uint32_t n_blue = 0;
    std::uint32_t n_white = 0;
    std::uint32_t sweeps_run = 0;
    std::uint64_t seed = 0;

    // Global polarization of this realization.
    double mu() const { return 2.0 * f_r - 1.0; }
};

// Influence score of node i under the current spins. Reads in-neighbors only;
// a node with no in-neighbors scores 0. In stochastic mode every in-neighbor
// has out-degree >= 1 (it has at least the edge into i). Callers apply the
// flip rule to non-fixed nodes only.
double influence_score(const DirectedGraph& graph, const std::vector<std::int8_t>& sigma,
                       NodeId i, MatrixMode mode);

// One asynchronous pass: visits `permutation` in order, recomputing Z_i on the
// current (in-place updated) state, setting sigma_i <- +1 if Z_i >
// positive_threshold, -1 if Z_i < 0, unchanged otherwise. Returns the number
// of spins that changed. Throws std::logic_error if the permutation contains
// a fixed node.
std::uint64_t sweep(const DirectedGraph& graph, SpinState& state,
                    std::span<const NodeId> permutation, MatrixMode mode,
                    double positive_threshold = 0.0);

// One full trajectory: white start, tau_max sweeps with a fresh uniformly
// random permutation of the non-fixed nodes per sweep, driven by a generator
// seeded from (master_seed, slot_index, realization_index). With early_stop,
// a zero-flip sweep ends the run: every spin sign is then consistent with its
// current Z, so the state is a fixed point under any later ordering.
RealizationResult run_realization(const DirectedGraph& graph, const ExperimentConfig& config,
                                  std::uint32_t slot_index, std::uint32_t realization_index);

// Receives each finished realization tagged with its index. run_slot
// serializes sink calls internally; arrival order is unspecified, so sinks
// must not depend on it.
using RealizationSink = std::function<void(std::uint32_t realization_index,
                                           const RealizationResult& result)>;

// Runs config.n_realizations independent realizations of one slot, scheduled
// across n_threads workers (0 = default_thread_count()). Each realization is
// deterministic given (master_seed, slot_index, realization_index), so
// results never depend on the thread count.
void run_slot(const DirectedGraph& graph, const ExperimentConfig& config,
              std::uint32_t slot_index, std::size_t n_threads, const RealizationSink& sink);

}  // namespace inof
