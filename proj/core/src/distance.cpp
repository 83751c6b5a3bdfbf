#include "inof/distance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "inof/csv.hpp"
#include "inof/numeric.hpp"

namespace inof {

std::vector<std::uint32_t> bfs_from_group(const DirectedGraph& graph,
                                          std::span<const NodeId> group,
                                          BfsDirection direction) {
    const std::size_t n = graph.n_nodes();
    if (group.empty()) throw std::invalid_argument("bfs: source group is empty");

    std::vector<std::uint32_t> dist(n, kUnreachable);
    std::vector<NodeId> frontier;
    for (const NodeId v : group) {
        if (v >= n)
            throw std::invalid_argument("bfs: node id " + std::to_string(v) + " out of range");
        if (dist[v] != 0) {
            dist[v] = 0;
            frontier.push_back(v);
        }
    }

    std::vector<NodeId> next;
    std::uint32_t level = 0;
    while (!frontier.empty()) {
        ++level;
        next.clear();
        for (const NodeId u : frontier) {
            const auto neighbors = direction == BfsDirection::forward ? graph.out_neighbors(u)
                                                                      : graph.in_neighbors(u);
            for (const NodeId v : neighbors) {
                if (dist[v] != kUnreachable) continue;
                dist[v] = level;
                next.push_back(v);
            }
        }
        frontier.swap(next);
    }
    return dist;
}

std::vector<JointDistanceCell> joint_distance_counts(std::span<const std::uint32_t> d_r,
                                                     std::span<const std::uint32_t> d_b) {
    if (d_r.size() != d_b.size())
        throw std::invalid_argument("joint_distance_counts: length mismatch");
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> cells;
    for (std::size_t i = 0; i < d_r.size(); ++i) {
        if (d_r[i] == kUnreachable || d_b[i] == kUnreachable) continue;
        ++cells[{d_r[i], d_b[i]}];
    }
    std::vector<JointDistanceCell> out;
    out.reserve(cells.size());
    for (const auto& [key, count] : cells) out.push_back({key.first, key.second, count});
    return out;
}

std::string_view diagonal_name(Diagonal d) {
    switch (d) {
        case Diagonal::closer_red:
            return "closer_red";
        case Diagonal::equal_distance:
            return "equal";
        case Diagonal::closer_blue:
            return "closer_blue";
    }
    return "unknown";
}

std::vector<DistanceProfileRow> delta_mu_by_distance(std::span<const std::uint32_t> d_r,
                                                     std::span<const std::uint32_t> d_b,
                                                     const NodeStats& stats) {
    const std::size_t n = d_r.size();
    if (d_b.size() != n || stats.delta_mu.size() != n || stats.white_freq.size() != n)
        throw std::invalid_argument("delta_mu_by_distance: input size mismatch");

    struct Group {
        double sum = 0.0;
        double comp = 0.0;
        std::uint64_t count = 0;
    };
    std::map<std::pair<std::uint32_t, int>, Group> groups;
    for (std::size_t i = 0; i < n; ++i) {
        if (d_r[i] == kUnreachable || d_b[i] == kUnreachable) continue;
        if (stats.white_freq[i] == 1.0) continue;
        const std::uint32_t d = std::min(d_r[i], d_b[i]);
        const int side = d_r[i] < d_b[i] ? 0 : (d_r[i] == d_b[i] ? 1 : 2);
        Group& g = groups[{d, side}];
        const double y = stats.delta_mu[i] - g.comp;
        const double t = g.sum + y;
        g.comp = (t - g.sum) - y;
        g.sum = t;
        ++g.count;
    }

    std::vector<DistanceProfileRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, g] : groups) {
        DistanceProfileRow row;
        row.d = key.first;
        row.diagonal = static_cast<Diagonal>(key.second);
        row.mean_delta_mu = g.sum / static_cast<double>(g.count);
        row.count = g.count;
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::int64_t csv_distance(std::uint32_t d) {
    return d == kUnreachable ? -1 : static_cast<std::int64_t>(d);
}

}  // namespace

void write_distances_csv(const DirectedGraph& graph, std::span<const std::uint32_t> d_r,
                         std::span<const std::uint32_t> d_b, const std::string& path) {
    const std::size_t n = graph.n_nodes();
    if (d_r.size() != n || d_b.size() != n)
        throw std::invalid_argument("write_distances_csv: input size mismatch");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "node_id,title,d_r,d_b\n";
    for (NodeId v = 0; v < n; ++v)
        out << v << ',' << csv::escape(graph.title(v)) << ',' << csv_distance(d_r[v]) << ','
            << csv_distance(d_b[v]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_joint_counts_csv(std::span<const JointDistanceCell> cells, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "d_r,d_b,count\n";
    for (const auto& c : cells) out << c.d_r << ',' << c.d_b << ',' << c.count << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_distance_profile_csv(std::span<const DistanceProfileRow> rows,
                                const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "d,diagonal,mean_delta_mu,count\n";
    for (const auto& r : rows)
        out << r.d << ',' << diagonal_name(r.diagonal) << ','
            << csv::format_double(r.mean_delta_mu) << ',' << r.count << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace inof
