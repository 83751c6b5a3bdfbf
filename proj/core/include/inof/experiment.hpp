#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inof/engine.hpp"
#include "inof/graph.hpp"
#include "inof/stats.hpp"

namespace inof {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Declarative description of one simulation run, as read from a JSON config
// file or assembled from CLI flags.
struct ExperimentSpec {
    std::string graph_path;
    std::vector<std::string> red_specs;  // exact titles, or "#<id>" raw node ids
    std::vector<std::string> blue_specs;
    std::string matrix = "adjacency";  // adjacency | stochastic
    std::uint32_t tau_max = 20;
    std::uint32_t n_realizations = 1000;
    std::uint32_t n_slots = 1;
    std::uint64_t master_seed = 0;
    bool early_stop = false;
    double positive_threshold = 0.0;
    std::size_t n_threads = 0;  // 0 = default_thread_count()
    std::string out_dir;
    bool dump_realizations = false;
    double fr_bin_width = kFrBinWidth;
    double mu_bin_width = kMuBinWidth;
    double pagerank_alpha = 0.85;

    // Strict parse: unknown keys are errors, so config typos cannot silently
    // fall back to defaults.
    static ExperimentSpec from_json_file(const std::string& path);

    MatrixMode matrix_mode() const;  // throws std::invalid_argument on bad name
};

// Maps title-or-"#id" specs to node ids. Every failure is collected and
// reported in one std::invalid_argument.
std::vector<NodeId> resolve_nodes(const DirectedGraph& graph,
                                  std::span<const std::string> specs);

using ProgressFn = std::function<void(const std::string& line)>;

// Full pipeline: PageRank, n_slots simulation slots, per-slot outputs
// (summary.json, nodes.csv, optional realizations.csv), pooled nodes.csv and
// summary.json, and an atomically written manifest.json that pins everything
// needed to reproduce the run. Returns the manifest path. All simulation
// outputs are independent of n_threads.
std::string run_experiment(const DirectedGraph& graph, const ExperimentSpec& spec,
                           const ProgressFn& progress = {});

// Post-hoc analyses over a completed run directory (located via its
// manifest.json).
void analyze_histogram(const std::string& results_dir, const std::string& which,
                       const std::string& out_csv);  // which: "fr" | "mu"
void analyze_fluctuations(const std::string& results_dir, const std::string& out_json);
void analyze_correlate_slots(const std::string& results_dir, const std::string& out_csv,
                             const std::string& out_json);
// Joins a title,value CSV against pooled per-node delta_mu on exact title and
// reports all three correlation coefficients.
void analyze_covariate(const std::string& results_dir, const std::string& covariate_csv,
                       const std::string& out_json);
// Re-emits a filtered per-node report (same columns as nodes.csv).
void analyze_report(const std::string& results_dir, const NodeSelection& selection,
                    const std::string& out_csv);

// Reads a full per-node report (a nodes.csv covering every node id) back
// into id-indexed per-node statistics.
NodeStats load_node_stats(const std::string& nodes_csv);

}  // namespace inof
