#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inof/graph.hpp"
#include "inof/stats.hpp"

namespace inof {

// Marker for nodes with no directed path from the source group.
inline constexpr std::uint32_t kUnreachable = 0xFFFFFFFFu;

// forward follows edges src->dst, the direction influence propagates (a
// node's score reads its in-neighbors). reverse is kept for sensitivity
// analysis of the ambiguous "distance to" reading.
enum class BfsDirection { forward, reverse };

// Multi-source BFS hop counts; 0 on the group's own nodes, kUnreachable
// where no path exists. Throws std::invalid_argument on an empty group or
// out-of-range ids.
std::vector<std::uint32_t> bfs_from_group(const DirectedGraph& graph,
                                          std::span<const NodeId> group, BfsDirection direction);

struct JointDistanceCell {
    std::uint32_t d_r = 0;
    std::uint32_t d_b = 0;
    std::uint64_t count = 0;
};

// Counts nodes by (d_r, d_b) over nodes reachable from both groups, sorted by
// (d_r, d_b). Throws std::invalid_argument on length mismatch.
std::vector<JointDistanceCell> joint_distance_counts(std::span<const std::uint32_t> d_r,
                                                     std::span<const std::uint32_t> d_b);

enum class Diagonal { closer_red, equal_distance, closer_blue };

// String form used in CSV output: closer_red | equal | closer_blue.
std::string_view diagonal_name(Diagonal d);

struct DistanceProfileRow {
    std::uint32_t d = 0;  // min(d_r, d_b)
    Diagonal diagonal = Diagonal::equal_distance;
    double mean_delta_mu = 0.0;
    std::uint64_t count = 0;
};

// Groups jointly-reachable, non-persistently-white nodes by
// (min(d_r, d_b), sign(d_b - d_r)) and averages delta_mu per group. Rows
// sorted by (d, closer_red < equal < closer_blue).
std::vector<DistanceProfileRow> delta_mu_by_distance(std::span<const std::uint32_t> d_r,
                                                     std::span<const std::uint32_t> d_b,
                                                     const NodeStats& stats);

// CSV writers. Unreachable distances appear as -1 in distances.csv.
void write_distances_csv(const DirectedGraph& graph, std::span<const std::uint32_t> d_r,
                         std::span<const std::uint32_t> d_b, const std::string& path);
void write_joint_counts_csv(std::span<const JointDistanceCell> cells, const std::string& path);
void write_distance_profile_csv(std::span<const DistanceProfileRow> rows,
                                const std::string& path);

}  // namespace inof
