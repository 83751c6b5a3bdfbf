#include "inof/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "inof/csv.hpp"
#include "inof/numeric.hpp"

namespace inof {

namespace {

// Bin count robust against (hi - lo) / width landing a hair above an integer.
std::size_t bin_count(double lo, double hi, double width) {
    const double raw = (hi - lo) / width;
    const auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return n == 0 ? 1 : n;
}

}  // namespace

double Histogram::density_mass() const {
    return compensated_sum(0, density.size(), [&](std::size_t k) { return density[k] * width; });
}

Histogram histogram(std::span<const double> samples, double bin_width, double lo, double hi) {
    if (samples.empty()) throw std::invalid_argument("histogram: empty sample set");
    if (!(bin_width > 0.0)) throw std::invalid_argument("histogram: bin width must be positive");
    if (!(hi > lo)) throw std::invalid_argument("histogram: range must satisfy hi > lo");

    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.width = bin_width;
    h.n_samples = samples.size();
    const std::size_t n_bins = bin_count(lo, hi, bin_width);
    h.counts.assign(n_bins, 0);
    for (const double x : samples) {
        auto idx = static_cast<std::int64_t>(std::floor((x - lo) / bin_width));
        if (idx < 0) idx = 0;
        if (idx >= static_cast<std::int64_t>(n_bins)) idx = static_cast<std::int64_t>(n_bins) - 1;
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    h.density.resize(n_bins);
    const double norm = static_cast<double>(h.n_samples) * bin_width;
    for (std::size_t k = 0; k < n_bins; ++k)
        h.density[k] = static_cast<double>(h.counts[k]) / norm;
    return h;
}

SlotAccumulator::SlotAccumulator(std::size_t n_nodes, std::uint32_t n_realizations)
    : sigma_sum_(n_nodes, 0),
      white_count_(n_nodes, 0),
      fr_samples_(n_realizations, 0.0),
      seen_(n_realizations, 0),
      n_realizations_(n_realizations) {
    if (n_nodes == 0) throw std::invalid_argument("accumulator: empty graph");
    if (n_realizations == 0) throw std::invalid_argument("accumulator: zero realizations");
}

void SlotAccumulator::add(std::uint32_t realization_index, const RealizationResult& result) {
    if (realization_index >= n_realizations_)
        throw std::invalid_argument("accumulator: realization index out of range");
    if (seen_[realization_index])
        throw std::logic_error("accumulator: realization " + std::to_string(realization_index) +
                               " added twice");
    if (result.final_sigma.size() != sigma_sum_.size())
        throw std::invalid_argument("accumulator: node count mismatch");
    for (std::size_t i = 0; i < sigma_sum_.size(); ++i) {
        const std::int8_t s = result.final_sigma[i];
        sigma_sum_[i] += s;
        if (s == 0) ++white_count_[i];
    }
    fr_samples_[realization_index] = result.f_r;
    seen_[realization_index] = 1;
    ++n_added_;
}

SlotStats SlotAccumulator::finalize(double fr_bin_width, double mu_bin_width) const {
    if (n_added_ != n_realizations_)
        throw std::logic_error("accumulator: " + std::to_string(n_added_) + " of " +
                               std::to_string(n_realizations_) + " realizations added");
    const std::size_t n = sigma_sum_.size();
    const auto n_r = static_cast<double>(n_realizations_);

    SlotStats out;
    out.nodes.mu.resize(n);
    out.nodes.white_freq.resize(n);
    out.nodes.delta_mu.resize(n);

    std::vector<double> colored_mu;
    colored_mu.reserve(n);
    std::uint64_t n_isolated = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out.nodes.mu[i] = static_cast<double>(sigma_sum_[i]) / n_r;
        out.nodes.white_freq[i] = static_cast<double>(white_count_[i]) / n_r;
        if (white_count_[i] == n_realizations_)
            ++n_isolated;
        else
            colored_mu.push_back(out.nodes.mu[i]);
    }
    if (colored_mu.empty())
        throw std::logic_error("accumulator: every node is persistently white");

    out.summary.mu_0 = kahan_sum(colored_mu) / static_cast<double>(colored_mu.size());
    for (std::size_t i = 0; i < n; ++i)
        out.nodes.delta_mu[i] = out.nodes.mu[i] - out.summary.mu_0;

    out.summary.mu_realization_mean =
        compensated_sum(0, fr_samples_.size(),
                        [&](std::size_t r) { return 2.0 * fr_samples_[r] - 1.0; }) /
        n_r;
    out.summary.isolated_fraction = static_cast<double>(n_isolated) / static_cast<double>(n);
    out.summary.n_realizations = n_realizations_;
    out.summary.fr_samples = fr_samples_;
    out.summary.fr_histogram = histogram(fr_samples_, fr_bin_width, 0.0, 1.0);
    out.summary.mu_histogram = histogram(colored_mu, mu_bin_width, -1.0, 1.0);
    return out;
}

SlotStats aggregate_nodes(std::span<const RealizationResult> results, double fr_bin_width,
                          double mu_bin_width) {
    if (results.empty()) throw std::invalid_argument("aggregate_nodes: empty result set");
    SlotAccumulator acc(results[0].final_sigma.size(),
                        static_cast<std::uint32_t>(results.size()));
    for (std::size_t r = 0; r < results.size(); ++r)
        acc.add(static_cast<std::uint32_t>(r), results[r]);
    return acc.finalize(fr_bin_width, mu_bin_width);
}

FluctuationReport fluctuations(std::span<const SlotSummary> summaries,
                               std::span<const NodeStats> node_stats) {
    const std::size_t n_slots = summaries.size();
    if (n_slots < 2) throw std::invalid_argument("fluctuations: need at least 2 slots");
    if (node_stats.size() != n_slots)
        throw std::invalid_argument("fluctuations: summary/node-stats count mismatch");
    const std::size_t n = node_stats[0].mu.size();
    for (const auto& s : node_stats)
        if (s.mu.size() != n)
            throw std::invalid_argument("fluctuations: slots cover different node counts");

    FluctuationReport report;
    report.n_slots = static_cast<std::uint32_t>(n_slots);
    report.per_slot_mu0.reserve(n_slots);
    for (const auto& s : summaries) report.per_slot_mu0.push_back(s.mu_0);

    const double mean = kahan_sum(report.per_slot_mu0) / static_cast<double>(n_slots);
    const double var = compensated_sum(0, n_slots,
                                       [&](std::size_t j) {
                                           const double d = report.per_slot_mu0[j] - mean;
                                           return d * d;
                                       }) /
                       static_cast<double>(n_slots);
    report.sigma_0 = std::sqrt(var);

    double pair_sum = 0.0, pair_c = 0.0;
    std::size_t n_pairs = 0;
    for (std::size_t a = 0; a < n_slots; ++a) {
        for (std::size_t b = a + 1; b < n_slots; ++b) {
            const double ms = compensated_sum(0, n,
                                              [&](std::size_t i) {
                                                  const double d = node_stats[a].mu[i] -
                                                                   node_stats[b].mu[i];
                                                  return d * d;
                                              }) /
                              static_cast<double>(n);
            const double y = std::sqrt(ms) - pair_c;
            const double t = pair_sum + y;
            pair_c = (t - pair_sum) - y;
            pair_sum = t;
            ++n_pairs;
        }
    }
    report.sigma_mu = pair_sum / static_cast<double>(n_pairs);
    return report;
}

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const double mx = compensated_sum(0, n, [&](std::size_t i) { return x[i]; }) /
                      static_cast<double>(n);
    const double my = compensated_sum(0, n, [&](std::size_t i) { return y[i]; }) /
                      static_cast<double>(n);
    const double sxx =
        compensated_sum(0, n, [&](std::size_t i) { return (x[i] - mx) * (x[i] - mx); });
    const double syy =
        compensated_sum(0, n, [&](std::size_t i) { return (y[i] - my) * (y[i] - my); });
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("correlate: zero variance input");
    const double sxy =
        compensated_sum(0, n, [&](std::size_t i) { return (x[i] - mx) * (y[i] - my); });
    // sqrt of the product (not product of sqrts) so that x == y yields
    // sxx / sqrt(sxx^2) = 1 exactly.
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

// Average ranks (1-based); tied runs share the mean of their rank range.
std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

// Count pairs a < b with seq[a] > seq[b] via merge sort. seq is consumed.
std::uint64_t count_inversions(std::vector<double>& seq, std::vector<double>& buf) {
    const std::size_t n = seq.size();
    std::uint64_t inversions = 0;
    for (std::size_t run = 1; run < n; run *= 2) {
        for (std::size_t left = 0; left + run < n; left += 2 * run) {
            const std::size_t mid = left + run;
            const std::size_t right = std::min(mid + run, n);
            std::size_t a = left, b = mid, w = left;
            while (a < mid && b < right) {
                if (seq[b] < seq[a]) {
                    inversions += mid - a;
                    buf[w++] = seq[b++];
                } else {
                    buf[w++] = seq[a++];
                }
            }
            while (a < mid) buf[w++] = seq[a++];
            while (b < right) buf[w++] = seq[b++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(left),
                      buf.begin() + static_cast<std::ptrdiff_t>(right),
                      seq.begin() + static_cast<std::ptrdiff_t>(left));
        }
    }
    return inversions;
}

// Sum over equal-value runs of t*(t-1)/2, for a sorted-by-key sequence.
template <typename Equal>
std::uint64_t tied_pairs(std::size_t n, Equal&& equal) {
    std::uint64_t pairs = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && equal(j, j + 1)) ++j;
        const std::uint64_t t = j - i + 1;
        pairs += t * (t - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::uint64_t n1 =
        tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[order[a]] == x[order[b]]; });
    const std::uint64_t n3 = tied_pairs(n, [&](std::size_t a, std::size_t b) {
        return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]];
    });

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    std::vector<double> sorted_y(ys);
    std::sort(sorted_y.begin(), sorted_y.end());
    const std::uint64_t n2 =
        tied_pairs(n, [&](std::size_t a, std::size_t b) { return sorted_y[a] == sorted_y[b]; });

    if (n0 == n1 || n0 == n2)
        throw std::invalid_argument("correlate: zero variance input");

    // Within x-tied blocks ys ascends, so inversions count exactly the
    // discordant pairs (strict x and strict y disagreement).
    std::vector<double> buf(n);
    const std::uint64_t discordant = count_inversions(ys, buf);

    const double numerator = static_cast<double>(n0) - static_cast<double>(n1) -
                             static_cast<double>(n2) + static_cast<double>(n3) -
                             2.0 * static_cast<double>(discordant);
    // Single sqrt of the product, not a product of sqrts: when x == y the
    // argument is a correctly rounded square, whose root comes back exactly,
    // making self-correlation exactly 1.
    const double denominator =
        std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
    return std::clamp(numerator / denominator, -1.0, 1.0);
}

}  // namespace

double correlate(std::span<const double> x, std::span<const double> y,
                 CorrelationMethod method) {
    if (x.size() != y.size()) throw std::invalid_argument("correlate: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("correlate: need at least 3 pairs");
    switch (method) {
        case CorrelationMethod::pearson:
            return pearson(x, y);
        case CorrelationMethod::spearman: {
            const std::vector<double> rx = average_ranks(x);
            const std::vector<double> ry = average_ranks(y);
            return pearson(rx, ry);
        }
        case CorrelationMethod::kendall:
            return kendall_tau_b(x, y);
    }
    throw std::invalid_argument("correlate: unknown method");
}

PowerLawFit fit_power_law(std::span<const double> n_values,
                          std::span<const double> sigma_values) {
    if (n_values.size() != sigma_values.size())
        throw std::invalid_argument("fit_power_law: length mismatch");
    const std::size_t n = n_values.size();
    if (n < 3) throw std::invalid_argument("fit_power_law: need at least 3 points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(n_values[i] > 0.0) || !(sigma_values[i] > 0.0))
            throw std::invalid_argument("fit_power_law: all values must be positive");
        lx[i] = std::log(n_values[i]);
        ly[i] = std::log(sigma_values[i]);
    }
    const double mx = kahan_sum(lx) / static_cast<double>(n);
    const double my = kahan_sum(ly) / static_cast<double>(n);
    const double sxx =
        compensated_sum(0, n, [&](std::size_t i) { return (lx[i] - mx) * (lx[i] - mx); });
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law: degenerate abscissae");
    const double sxy =
        compensated_sum(0, n, [&](std::size_t i) { return (lx[i] - mx) * (ly[i] - my); });
    PowerLawFit fit;
    fit.eta = sxy / sxx;
    fit.prefactor = std::exp(my - fit.eta * mx);
    return fit;
}

namespace {

std::vector<NodeId> select_nodes(const DirectedGraph& graph, const PageRankResult& pagerank,
                                 const NodeSelection& selection) {
    const std::size_t n = graph.n_nodes();
    std::vector<NodeId> selected;
    switch (selection.kind) {
        case NodeSelection::Kind::top_k: {
            const std::size_t k = std::min<std::size_t>(selection.k, n);
            selected.resize(n);
            for (NodeId v = 0; v < n; ++v) selected[pagerank.k_index[v] - 1] = v;
            selected.resize(k);
            return selected;  // already in rank order
        }
        case NodeSelection::Kind::ids: {
            for (const NodeId v : selection.ids) {
                if (v >= n)
                    throw std::invalid_argument("report_nodes: node id " + std::to_string(v) +
                                                " out of range");
                selected.push_back(v);
            }
            break;
        }
        case NodeSelection::Kind::titles: {
            if (!graph.has_titles())
                throw std::invalid_argument("report_nodes: graph carries no titles");
            std::unordered_map<std::string_view, NodeId> index;
            index.reserve(n);
            for (NodeId v = 0; v < n; ++v)
                index.emplace(graph.title(v), v);  // first occurrence wins
            std::string missing;
            for (const std::string& t : selection.titles) {
                const auto it = index.find(t);
                if (it == index.end()) {
                    if (!missing.empty()) missing += ", ";
                    missing += t;
                } else {
                    selected.push_back(it->second);
                }
            }
            if (!missing.empty())
                throw std::invalid_argument("report_nodes: unresolved titles: " + missing);
            break;
        }
    }
    std::sort(selected.begin(), selected.end(), [&](NodeId a, NodeId b) {
        return pagerank.k_index[a] < pagerank.k_index[b];
    });
    return selected;
}

}  // namespace

void report_nodes(const DirectedGraph& graph, const NodeStats& stats,
                  const PageRankResult& pagerank, const NodeSelection& selection,
                  std::ostream& out) {
    const std::size_t n = graph.n_nodes();
    if (stats.mu.size() != n || stats.delta_mu.size() != n || stats.white_freq.size() != n ||
        pagerank.k_index.size() != n)
        throw std::invalid_argument("report_nodes: input size mismatch");
    out << "node_id,title,k_index,mu,delta_mu,white_freq\n";
    for (const NodeId v : select_nodes(graph, pagerank, selection)) {
        out << v << ',' << csv::escape(graph.title(v)) << ',' << pagerank.k_index[v] << ','
            << csv::format_double(stats.mu[v]) << ',' << csv::format_double(stats.delta_mu[v])
            << ',' << csv::format_double(stats.white_freq[v]) << '\n';
    }
}

void write_nodes_csv(const DirectedGraph& graph, const NodeStats& stats,
                     const PageRankResult& pagerank, const NodeSelection& selection,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    report_nodes(graph, stats, pagerank, selection, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace inof
