#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "inof/engine.hpp"
#include "inof/graph.hpp"
#include "inof/pagerank.hpp"

namespace inof {

// Fixed-width binning over [lo, hi] with density p_k = count_k / (n * width),
// so that sum(p_k * width) = 1.
struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;
    std::uint64_t n_samples = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;

    double density_mass() const;  // sum of density * width
};

// Bins `samples`; values on or past a boundary are clamped into the nearest
// edge bin. Throws std::invalid_argument on empty samples, width <= 0, or
// hi <= lo.
Histogram histogram(std::span<const double> samples, double bin_width, double lo, double hi);

inline constexpr double kFrBinWidth = 1.0 / 30.0;
inline constexpr double kMuBinWidth = 1e-3;
inline constexpr double kMuBinWidthFine = 5e-4;  // for long high-statistics runs

// Per-node steady-state statistics over one batch of realizations.
// mu averages the final spin with white counted as 0, so -1 <= mu <= 1.
struct NodeStats {
    std::vector<double> mu;
    std::vector<double> white_freq;
    std::vector<double> delta_mu;  // mu - mu_0 for every node
};

struct SlotSummary {
    // Mean of mu over nodes that were colored in at least one realization
    // (persistently white nodes are excluded as unreachable communities).
    double mu_0 = 0.0;
    // Secondary view: mean over realizations of the global polarization
    // 2 f_r - 1. Coincides with mu_0 when no node is ever white.
    double mu_realization_mean = 0.0;
    double isolated_fraction = 0.0;
    std::uint32_t n_realizations = 0;
    std::vector<double> fr_samples;  // indexed by realization
    Histogram fr_histogram;
    Histogram mu_histogram;  // over per-node mu, persistently white excluded
};

struct SlotStats {
    NodeStats nodes;
    SlotSummary summary;
};

// Order-insensitive reduction of realization results: integer spin sums and
// white counts, so aggregate values are independent of arrival order and
// thread count. Not thread-safe; callers serialize add().
class SlotAccumulator {
  public:
    SlotAccumulator(std::size_t n_nodes, std::uint32_t n_realizations);

    // realization_index < n_realizations, each index at most once.
    void add(std::uint32_t realization_index, const RealizationResult& result);

    std::uint32_t n_added() const { return n_added_; }

    // Requires every realization added exactly once. Throws std::logic_error
    // otherwise.
    SlotStats finalize(double fr_bin_width = kFrBinWidth,
                       double mu_bin_width = kMuBinWidth) const;

  private:
    std::vector<std::int64_t> sigma_sum_;
    std::vector<std::uint32_t> white_count_;
    std::vector<double> fr_samples_;
    std::vector<std::uint8_t> seen_;
    std::uint32_t n_realizations_;
    std::uint32_t n_added_ = 0;
};

// Convenience wrapper: aggregate a completed batch held in memory.
SlotStats aggregate_nodes(std::span<const RealizationResult> results,
                          double fr_bin_width = kFrBinWidth, double mu_bin_width = kMuBinWidth);

// Slot-to-slot variability. sigma_0 is the population standard deviation of
// the per-slot mu_0 values; sigma_mu is sqrt((1/N) sum_i (mu_a(i)-mu_b(i))^2)
// averaged over all slot pairs (a, b).
struct FluctuationReport {
    double sigma_0 = 0.0;
    double sigma_mu = 0.0;
    std::uint32_t n_slots = 0;
    std::vector<double> per_slot_mu0;
};

// Throws std::invalid_argument with fewer than 2 slots or mismatched inputs.
FluctuationReport fluctuations(std::span<const SlotSummary> summaries,
                               std::span<const NodeStats> node_stats);

enum class CorrelationMethod { pearson, spearman, kendall };

// Pearson, Spearman (average ranks), or Kendall tau-b (tie-aware, computed in
// O(n log n)). Requires >= 3 pairs; throws std::invalid_argument when either
// input has zero variance (all-tied).
double correlate(std::span<const double> x, std::span<const double> y, CorrelationMethod method);

struct PowerLawFit {
    double eta = 0.0;        // exponent
    double prefactor = 0.0;  // B in sigma ~ B * n^eta
};

// Least-squares fit of log(sigma) against log(n). Requires >= 3 points, all
// positive; throws std::invalid_argument otherwise.
PowerLawFit fit_power_law(std::span<const double> n_values, std::span<const double> sigma_values);

// Row selection for per-node reports.
struct NodeSelection {
    enum class Kind { top_k, ids, titles };
    Kind kind = Kind::top_k;
    std::uint32_t k = 20;
    std::vector<NodeId> ids;
    std::vector<std::string> titles;
};

// Emits "node_id,title,k_index,mu,delta_mu,white_freq" rows sorted by
// ascending k_index. Title selection is exact-match; unknown titles raise
// std::invalid_argument listing every unresolved name.
void report_nodes(const DirectedGraph& graph, const NodeStats& stats,
                  const PageRankResult& pagerank, const NodeSelection& selection,
                  std::ostream& out);
void write_nodes_csv(const DirectedGraph& graph, const NodeStats& stats,
                     const PageRankResult& pagerank, const NodeSelection& selection,
                     const std::string& path);

}  // namespace inof
