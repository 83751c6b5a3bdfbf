#include "inof/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "inof/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary cache I/O assumes a little-endian host");

namespace inof {

namespace {

void build_csr(NodeId n_nodes, const std::vector<Edge>& edges, bool by_src,
               std::vector<std::uint64_t>& offsets, std::vector<NodeId>& adj) {
    offsets.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
    for (const auto& [src, dst] : edges) ++offsets[(by_src ? src : dst) + 1];
    for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
    adj.resize(edges.size());
    std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [src, dst] : edges) {
        const NodeId key = by_src ? src : dst;
        adj[cursor[key]++] = by_src ? dst : src;
    }
    for (NodeId v = 0; v < n_nodes; ++v)
        std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                  adj.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
}

std::uint64_t csr_fingerprint(std::uint64_t n_nodes,
                              const std::vector<std::uint64_t>& offsets,
                              const std::vector<NodeId>& adj, bool rows_are_src) {
    // Commutative sum of per-edge hashes: invariant to edge order, sensitive
    // to any edge change.
    std::uint64_t h = mix64(n_nodes + 0x9E3779B97F4A7C15ULL);
    for (NodeId v = 0; v < n_nodes; ++v) {
        for (std::uint64_t e = offsets[v]; e < offsets[v + 1]; ++e) {
            const std::uint64_t src = rows_are_src ? v : adj[e];
            const std::uint64_t dst = rows_are_src ? adj[e] : v;
            h += mix64((src << 32) | dst);
        }
    }
    return h;
}

}  // namespace

DirectedGraph DirectedGraph::from_edges(NodeId n_nodes, std::vector<Edge> edges,
                                        std::vector<std::string> titles,
                                        LoadReport* report) {
    std::uint64_t self_loops = 0;
    std::erase_if(edges, [&](const Edge& e) {
        if (e.first == e.second) {
            ++self_loops;
            return true;
        }
        return false;
    });
    for (const auto& [src, dst] : edges)
        if (src >= n_nodes || dst >= n_nodes)
            throw std::invalid_argument("edge endpoint out of range");

    std::sort(edges.begin(), edges.end());
    const std::size_t before = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const std::uint64_t duplicates = before - edges.size();

    DirectedGraph g;
    build_csr(n_nodes, edges, /*by_src=*/true, g.out_offsets_, g.out_targets_);
    build_csr(n_nodes, edges, /*by_src=*/false, g.in_offsets_, g.in_sources_);

    const std::uint64_t fp_out = csr_fingerprint(n_nodes, g.out_offsets_, g.out_targets_, true);
    const std::uint64_t fp_in = csr_fingerprint(n_nodes, g.in_offsets_, g.in_sources_, false);
    if (fp_out != fp_in)
        throw std::logic_error("CSR cross-check failed: in/out edge sets disagree");

    if (!titles.empty() && titles.size() != n_nodes)
        throw std::invalid_argument("titles count does not match n_nodes");
    g.titles_ = std::move(titles);

    if (report) {
        report->n_nodes = n_nodes;
        report->n_edges_kept = g.n_edges();
        report->n_self_loops_dropped = self_loops;
        report->n_duplicate_edges_merged = duplicates;
        report->n_dangling_nodes = g.n_dangling();
    }
    return g;
}

std::uint64_t DirectedGraph::n_dangling() const {
    std::uint64_t count = 0;
    for (NodeId v = 0; v < n_nodes(); ++v)
        if (out_degree(v) == 0) ++count;
    return count;
}

std::uint64_t DirectedGraph::fingerprint() const {
    return csr_fingerprint(n_nodes(), out_offsets_, out_targets_, true);
}

namespace {

// Buffered edge-list parser. Accepts exactly two non-negative integers per
// line; blank lines are skipped. Keeps the 1-based line number for error
// messages.
class EdgeListParser {
public:
    explicit EdgeListParser(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw std::runtime_error("cannot open edge list: " + path);
    }

    bool next(NodeId& src, NodeId& dst) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const char* p = line.c_str();
            const char* end = p + line.size();
            skip_ws(p, end);
            if (p == end) continue;  // blank line
            src = parse_id(p, end);
            skip_ws(p, end);
            dst = parse_id(p, end);
            skip_ws(p, end);
            if (p != end) fail("trailing characters");
            return true;
        }
        if (in_.bad()) throw std::runtime_error("I/O error reading " + path_);
        return false;
    }

private:
    static void skip_ws(const char*& p, const char* end) {
        while (p != end && (*p == ' ' || *p == '\t')) ++p;
    }

    NodeId parse_id(const char*& p, const char* end) {
        if (p == end || *p < '0' || *p > '9') fail("expected an integer");
        std::uint64_t v = 0;
        while (p != end && *p >= '0' && *p <= '9') {
            v = v * 10 + static_cast<std::uint64_t>(*p - '0');
            if (v > std::numeric_limits<NodeId>::max() - 1) fail("node id overflows 32-bit range");
            ++p;
        }
        return static_cast<NodeId>(v);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::runtime_error(path_ + ": malformed line " + std::to_string(line_no_) +
                                 ": " + what);
    }

    std::string path_;
    std::ifstream in_;
    std::uint64_t line_no_ = 0;
};

std::vector<std::string> read_titles(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open titles file: " + path);
    std::vector<std::string> titles;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        titles.push_back(line);
    }
    if (in.bad()) throw std::runtime_error("I/O error reading " + path);
    return titles;
}

}  // namespace

IngestResult ingest_edge_list(const std::string& edges_path, const std::string& titles_path) {
    std::vector<Edge> edges;
    NodeId max_id = 0;
    bool any = false;
    {
        EdgeListParser parser(edges_path);
        NodeId src, dst;
        while (parser.next(src, dst)) {
            edges.emplace_back(src, dst);
            max_id = std::max({max_id, src, dst});
            any = true;
        }
    }
    NodeId n_nodes = any ? max_id + 1 : 0;

    std::vector<std::string> titles;
    std::string title_warning;
    if (!titles_path.empty()) {
        titles = read_titles(titles_path);
        if (titles.size() > n_nodes) {
            n_nodes = static_cast<NodeId>(titles.size());
        } else if (titles.size() < n_nodes) {
            title_warning = "titles file has " + std::to_string(titles.size()) +
                            " lines for " + std::to_string(n_nodes) + " nodes";
            titles.resize(n_nodes);  // pad; missing titles stay empty
        }
    }

    IngestResult result;
    result.graph = DirectedGraph::from_edges(n_nodes, std::move(edges), std::move(titles),
                                             &result.report);
    if (!title_warning.empty()) result.report.warnings.push_back(title_warning);
    return result;
}

namespace {

constexpr char kMagic[4] = {'I', 'N', 'O', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void write_vec(std::ofstream& out, const std::vector<T>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void read_raw(std::ifstream& in, T& value, const std::string& path) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("truncated graph cache: " + path);
}

template <typename T>
void read_vec(std::ifstream& in, std::vector<T>& v, std::size_t count, const std::string& path) {
    v.resize(count);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(count * sizeof(T)));
    if (!in) throw std::runtime_error("truncated graph cache: " + path);
}

}  // namespace

void save_binary(const DirectedGraph& graph, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out.write(kMagic, 4);
        write_raw(out, kVersion);
        write_raw(out, static_cast<std::uint64_t>(graph.n_nodes()));
        write_raw(out, graph.n_edges());
        write_vec(out, graph.out_offsets());
        write_vec(out, graph.out_targets());
        write_vec(out, graph.in_offsets());
        write_vec(out, graph.in_sources());
        const std::uint8_t has_titles = graph.has_titles() ? 1 : 0;
        write_raw(out, has_titles);
        if (has_titles) {
            for (const auto& t : graph.titles()) {
                write_raw(out, static_cast<std::uint32_t>(t.size()));
                out.write(t.data(), static_cast<std::streamsize>(t.size()));
            }
        }
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move graph cache into place: " + path);
}

DirectedGraph load_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph cache: " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not an INOF graph cache: " + path);
    std::uint32_t version = 0;
    read_raw(in, version, path);
    if (version != kVersion)
        throw std::runtime_error("unsupported graph cache version " + std::to_string(version) +
                                 ": " + path);

    std::uint64_t n_nodes = 0, n_edges = 0;
    read_raw(in, n_nodes, path);
    read_raw(in, n_edges, path);

    DirectedGraph g;
    read_vec(in, g.out_offsets_, static_cast<std::size_t>(n_nodes) + 1, path);
    read_vec(in, g.out_targets_, static_cast<std::size_t>(n_edges), path);
    read_vec(in, g.in_offsets_, static_cast<std::size_t>(n_nodes) + 1, path);
    read_vec(in, g.in_sources_, static_cast<std::size_t>(n_edges), path);

    std::uint8_t has_titles = 0;
    read_raw(in, has_titles, path);
    if (has_titles) {
        g.titles_.resize(static_cast<std::size_t>(n_nodes));
        for (auto& t : g.titles_) {
            std::uint32_t len = 0;
            read_raw(in, len, path);
            t.resize(len);
            in.read(t.data(), len);
            if (!in) throw std::runtime_error("truncated graph cache: " + path);
        }
    }

    // Structural validation: monotone offsets ending at n_edges, ids in range,
    // and matching in/out edge sets.
    auto check_offsets = [&](const std::vector<std::uint64_t>& off) {
        if (off.front() != 0 || off.back() != n_edges)
            throw std::runtime_error("corrupt graph cache (offsets): " + path);
        for (std::size_t i = 1; i < off.size(); ++i)
            if (off[i] < off[i - 1])
                throw std::runtime_error("corrupt graph cache (offsets): " + path);
    };
    check_offsets(g.out_offsets_);
    check_offsets(g.in_offsets_);
    for (const NodeId v : g.out_targets_)
        if (v >= n_nodes) throw std::runtime_error("corrupt graph cache (targets): " + path);
    for (const NodeId v : g.in_sources_)
        if (v >= n_nodes) throw std::runtime_error("corrupt graph cache (sources): " + path);
    if (csr_fingerprint(n_nodes, g.out_offsets_, g.out_targets_, true) !=
        csr_fingerprint(n_nodes, g.in_offsets_, g.in_sources_, false))
        throw std::runtime_error("corrupt graph cache (in/out mismatch): " + path);

    return g;
}

}  // namespace inof
