#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace inof {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // (src, dst)

struct LoadReport {
    std::uint64_t n_nodes = 0;
    std::uint64_t n_edges_kept = 0;
    std::uint64_t n_self_loops_dropped = 0;
    std::uint64_t n_duplicate_edges_merged = 0;
    std::uint64_t n_dangling_nodes = 0;
    std::vector<std::string> warnings;
};

// Immutable simple digraph in CSR form, kept in both orientations: the spin
// update and the PageRank multiply scan in-neighbors, BFS and the ingestion
// cross-check scan out-neighbors. Node ids are dense in [0, n_nodes).
// Self-loops are dropped and parallel edges merged at construction.
// Safe to share across threads once built.
class DirectedGraph {
public:
    DirectedGraph() = default;

    // Builds from an arbitrary edge list. Reports how many self-loops were
    // dropped and duplicates merged through `report` when given.
    static DirectedGraph from_edges(NodeId n_nodes, std::vector<Edge> edges,
                                    std::vector<std::string> titles = {},
                                    LoadReport* report = nullptr);

    std::size_t n_nodes() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
    std::uint64_t n_edges() const { return out_targets_.size(); }

    std::span<const NodeId> out_neighbors(NodeId j) const {
        return {out_targets_.data() + out_offsets_[j],
                static_cast<std::size_t>(out_offsets_[j + 1] - out_offsets_[j])};
    }
    std::span<const NodeId> in_neighbors(NodeId i) const {
        return {in_sources_.data() + in_offsets_[i],
                static_cast<std::size_t>(in_offsets_[i + 1] - in_offsets_[i])};
    }
    std::uint32_t out_degree(NodeId j) const {
        return static_cast<std::uint32_t>(out_offsets_[j + 1] - out_offsets_[j]);
    }
    std::uint32_t in_degree(NodeId i) const {
        return static_cast<std::uint32_t>(in_offsets_[i + 1] - in_offsets_[i]);
    }
    std::uint64_t n_dangling() const;

    bool has_titles() const { return !titles_.empty(); }
    const std::vector<std::string>& titles() const { return titles_; }
    // Title for one node; empty string when no titles were loaded.
    std::string_view title(NodeId i) const {
        return titles_.empty() ? std::string_view{} : std::string_view(titles_[i]);
    }

    // Order-invariant 64-bit digest of the edge set (plus n_nodes). Used as
    // the in/out CSR cross-check and as the graph checksum in run manifests.
    std::uint64_t fingerprint() const;

    bool operator==(const DirectedGraph& other) const = default;

    // Raw CSR accessors for serialization and tests.
    const std::vector<std::uint64_t>& out_offsets() const { return out_offsets_; }
    const std::vector<NodeId>& out_targets() const { return out_targets_; }
    const std::vector<std::uint64_t>& in_offsets() const { return in_offsets_; }
    const std::vector<NodeId>& in_sources() const { return in_sources_; }

private:
    std::vector<std::uint64_t> out_offsets_;  // size n_nodes + 1
    std::vector<NodeId> out_targets_;         // sorted within each row
    std::vector<std::uint64_t> in_offsets_;
    std::vector<NodeId> in_sources_;          // sorted within each row
    std::vector<std::string> titles_;

    friend DirectedGraph load_binary(const std::string&);
};

// Reads a whitespace-separated "src dst" pair per line (0-based ids);
// n_nodes = max id + 1, or the title count if that is larger. Malformed
// input fails with the 1-based line number. A title-count mismatch is a
// warning in the report, not an error.
struct IngestResult {
    DirectedGraph graph;
    LoadReport report;
};
IngestResult ingest_edge_list(const std::string& edges_path,
                              const std::string& titles_path = {});

// Binary cache. Layout (all little-endian):
//   magic "INOF", u32 version, u64 n_nodes, u64 n_edges,
//   u64 out_offsets[n_nodes+1], u32 out_targets[n_edges],
//   u64 in_offsets[n_nodes+1],  u32 in_sources[n_edges],
//   u8 has_titles, then per node {u32 byte_len, bytes} when present.
void save_binary(const DirectedGraph& graph, const std::string& path);
DirectedGraph load_binary(const std::string& path);

}  // namespace inof
