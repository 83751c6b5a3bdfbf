#include "inof/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "inof/csv.hpp"
#include "inof/numeric.hpp"
#include "inof/pagerank.hpp"
#include "inof/parallel.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace inof {

namespace {

double monotonic_seconds(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

std::string slot_dir_name(std::uint32_t slot) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "slot_%03u", slot);
    return buf;
}

json histogram_to_json(const Histogram& h) {
    return json{{"lo", h.lo},         {"hi", h.hi},
                {"width", h.width},   {"n_samples", h.n_samples},
                {"counts", h.counts}, {"density", h.density}};
}

json summary_to_json(const SlotSummary& s) {
    return json{{"mu_0", s.mu_0},
                {"mu_realization_mean", s.mu_realization_mean},
                {"isolated_fraction", s.isolated_fraction},
                {"n_realizations", s.n_realizations},
                {"fr_samples", s.fr_samples},
                {"fr_histogram", histogram_to_json(s.fr_histogram)},
                {"mu_histogram", histogram_to_json(s.mu_histogram)}};
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json_file(const fs::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    return j;
}

double parse_csv_double(std::string_view field, const std::string& path, std::size_t line) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error(path + ": line " + std::to_string(line) +
                                 ": bad numeric field '" + std::string(field) + "'");
    return value;
}

std::uint64_t parse_csv_uint(std::string_view field, const std::string& path, std::size_t line) {
    std::uint64_t value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error(path + ": line " + std::to_string(line) +
                                 ": bad integer field '" + std::string(field) + "'");
    return value;
}

// Parsed per-node report, row order as stored (ascending k_index).
struct NodesTable {
    std::vector<NodeId> ids;
    std::vector<std::string> titles;
    std::vector<std::uint32_t> k_index;
    std::vector<double> mu;
    std::vector<double> delta_mu;
    std::vector<double> white_freq;

    std::size_t n_rows() const { return ids.size(); }
};

NodesTable read_nodes_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "node_id,title,k_index,mu,delta_mu,white_freq")
        throw std::runtime_error(path + ": unexpected header '" + line + "'");

    NodesTable t;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv::split(line);
        if (fields.size() != 6)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": expected 6 fields, got " + std::to_string(fields.size()));
        t.ids.push_back(static_cast<NodeId>(parse_csv_uint(fields[0], path, line_no)));
        t.titles.push_back(fields[1]);
        t.k_index.push_back(static_cast<std::uint32_t>(parse_csv_uint(fields[2], path, line_no)));
        t.mu.push_back(parse_csv_double(fields[3], path, line_no));
        t.delta_mu.push_back(parse_csv_double(fields[4], path, line_no));
        t.white_freq.push_back(parse_csv_double(fields[5], path, line_no));
    }
    if (t.ids.empty()) throw std::runtime_error(path + ": no data rows");
    return t;
}

// Rebuilds id-indexed NodeStats from a full per-node report.
NodeStats table_to_node_stats(const NodesTable& t, const std::string& path) {
    NodeId max_id = 0;
    for (const NodeId v : t.ids) max_id = std::max(max_id, v);
    const std::size_t n = static_cast<std::size_t>(max_id) + 1;
    if (t.n_rows() != n)
        throw std::runtime_error(path + ": not a full per-node report (" +
                                 std::to_string(t.n_rows()) + " rows, max id " +
                                 std::to_string(max_id) + ")");
    NodeStats stats;
    stats.mu.resize(n);
    stats.delta_mu.resize(n);
    stats.white_freq.resize(n);
    for (std::size_t row = 0; row < n; ++row) {
        const NodeId v = t.ids[row];
        stats.mu[v] = t.mu[row];
        stats.delta_mu[v] = t.delta_mu[row];
        stats.white_freq[v] = t.white_freq[row];
    }
    return stats;
}

struct RunLayout {
    fs::path dir;
    fs::path summary;
    fs::path nodes;
    std::vector<fs::path> slot_dirs;
};

RunLayout load_layout(const std::string& results_dir) {
    RunLayout layout;
    layout.dir = results_dir;
    const json manifest = read_json_file(layout.dir / "manifest.json");
    const json& outputs = manifest.at("outputs");
    layout.summary = layout.dir / outputs.at("summary").get<std::string>();
    layout.nodes = layout.dir / outputs.at("nodes").get<std::string>();
    for (const auto& s : outputs.at("slots"))
        layout.slot_dirs.push_back(layout.dir / s.get<std::string>());
    return layout;
}

}  // namespace

MatrixMode ExperimentSpec::matrix_mode() const {
    if (matrix == "adjacency") return MatrixMode::adjacency;
    if (matrix == "stochastic") return MatrixMode::stochastic;
    throw std::invalid_argument("unknown matrix mode '" + matrix +
                                "' (expected adjacency or stochastic)");
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_object()) throw std::runtime_error(path + ": config root must be an object");
    ExperimentSpec spec;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "graph")
                spec.graph_path = value.get<std::string>();
            else if (key == "red")
                spec.red_specs = value.get<std::vector<std::string>>();
            else if (key == "blue")
                spec.blue_specs = value.get<std::vector<std::string>>();
            else if (key == "matrix")
                spec.matrix = value.get<std::string>();
            else if (key == "tau")
                spec.tau_max = value.get<std::uint32_t>();
            else if (key == "realizations")
                spec.n_realizations = value.get<std::uint32_t>();
            else if (key == "slots")
                spec.n_slots = value.get<std::uint32_t>();
            else if (key == "seed")
                spec.master_seed = value.get<std::uint64_t>();
            else if (key == "early_stop")
                spec.early_stop = value.get<bool>();
            else if (key == "positive_threshold")
                spec.positive_threshold = value.get<double>();
            else if (key == "threads")
                spec.n_threads = value.get<std::size_t>();
            else if (key == "out")
                spec.out_dir = value.get<std::string>();
            else if (key == "dump_realizations")
                spec.dump_realizations = value.get<bool>();
            else if (key == "fr_bin_width")
                spec.fr_bin_width = value.get<double>();
            else if (key == "mu_bin_width")
                spec.mu_bin_width = value.get<double>();
            else if (key == "pagerank_alpha")
                spec.pagerank_alpha = value.get<double>();
            else
                throw std::invalid_argument(path + ": unknown config key '" + key + "'");
        } catch (const json::exception& e) {
            throw std::invalid_argument(path + ": key '" + key + "': " + e.what());
        }
    }
    return spec;
}

std::vector<NodeId> resolve_nodes(const DirectedGraph& graph,
                                  std::span<const std::string> specs) {
    std::unordered_map<std::string_view, NodeId> index;
    bool index_built = false;
    std::vector<NodeId> out;
    std::string missing;
    for (const std::string& spec : specs) {
        if (!spec.empty() && spec.front() == '#') {
            std::uint64_t id = 0;
            const auto* begin = spec.data() + 1;
            const auto* end = spec.data() + spec.size();
            const auto [ptr, ec] = std::from_chars(begin, end, id);
            if (ec != std::errc{} || ptr != end || id >= graph.n_nodes()) {
                if (!missing.empty()) missing += ", ";
                missing += spec;
            } else {
                out.push_back(static_cast<NodeId>(id));
            }
            continue;
        }
        if (!index_built) {
            if (!graph.has_titles())
                throw std::invalid_argument(
                    "graph carries no titles; use #<id> node references");
            index.reserve(graph.n_nodes());
            for (NodeId v = 0; v < graph.n_nodes(); ++v)
                index.emplace(graph.title(v), v);  // first occurrence wins
            index_built = true;
        }
        const auto it = index.find(std::string_view(spec));
        if (it == index.end()) {
            if (!missing.empty()) missing += ", ";
            missing += spec;
        } else {
            out.push_back(it->second);
        }
    }
    if (!missing.empty())
        throw std::invalid_argument("unresolved node references: " + missing);
    return out;
}

std::string run_experiment(const DirectedGraph& graph, const ExperimentSpec& spec,
                           const ProgressFn& progress) {
    const auto say = [&](const std::string& line) {
        if (progress) progress(line);
    };
    if (spec.out_dir.empty()) throw std::invalid_argument("run: output directory not set");

    ExperimentConfig config;
    config.red_nodes = resolve_nodes(graph, spec.red_specs);
    config.blue_nodes = resolve_nodes(graph, spec.blue_specs);
    config.matrix_mode = spec.matrix_mode();
    config.tau_max = spec.tau_max;
    config.n_realizations = spec.n_realizations;
    config.n_slots = spec.n_slots;
    config.master_seed = spec.master_seed;
    config.early_stop = spec.early_stop;
    config.positive_threshold = spec.positive_threshold;
    config.validate(graph.n_nodes());

    const std::uint64_t total_realizations =
        static_cast<std::uint64_t>(config.n_slots) * config.n_realizations;
    if (total_realizations > 0xFFFFFFFFull)
        throw std::invalid_argument("run: n_slots * n_realizations too large");

    const std::size_t n_threads =
        spec.n_threads == 0 ? default_thread_count() : spec.n_threads;
    const fs::path out_dir(spec.out_dir);
    fs::create_directories(out_dir);

    const auto t_start = std::chrono::steady_clock::now();
    say("pagerank: alpha " + csv::format_double(spec.pagerank_alpha));
    const PageRankResult pagerank =
        compute_pagerank(graph, spec.pagerank_alpha, 1e-12, 1000, n_threads);
    const double pagerank_seconds = monotonic_seconds(t_start);
    say("pagerank: converged in " + std::to_string(pagerank.iterations) + " iterations (" +
        csv::format_double(pagerank_seconds) + " s)");

    NodeSelection all_nodes;
    all_nodes.kind = NodeSelection::Kind::top_k;
    all_nodes.k = static_cast<std::uint32_t>(graph.n_nodes());

    struct RealizationRow {
        std::uint64_t seed = 0;
        double f_r = 0.0;
        std::uint32_t n_white = 0;
        std::uint32_t sweeps_run = 0;
    };

    SlotAccumulator pooled(graph.n_nodes(), static_cast<std::uint32_t>(total_realizations));
    std::vector<SlotSummary> slot_summaries;
    std::vector<NodeStats> slot_nodes;  // kept only when fluctuations are computable
    std::vector<std::string> slot_dirs;
    std::vector<double> slot_seconds;
    slot_summaries.reserve(config.n_slots);

    for (std::uint32_t s = 0; s < config.n_slots; ++s) {
        const auto t_slot = std::chrono::steady_clock::now();
        SlotAccumulator acc(graph.n_nodes(), config.n_realizations);
        std::vector<RealizationRow> rows(spec.dump_realizations ? config.n_realizations : 0);

        run_slot(graph, config, s, n_threads,
                 [&](std::uint32_t r, const RealizationResult& result) {
                     acc.add(r, result);
                     pooled.add(s * config.n_realizations + r, result);
                     if (spec.dump_realizations)
                         rows[r] = {result.seed, result.f_r, result.n_white, result.sweeps_run};
                 });

        SlotStats stats = acc.finalize(spec.fr_bin_width, spec.mu_bin_width);
        const std::string dir_name = slot_dir_name(s);
        const fs::path slot_dir = out_dir / dir_name;
        fs::create_directories(slot_dir);
        write_json_file(slot_dir / "summary.json", summary_to_json(stats.summary));
        write_nodes_csv(graph, stats.nodes, pagerank, all_nodes,
                        (slot_dir / "nodes.csv").string());
        if (spec.dump_realizations) {
            std::ofstream out(slot_dir / "realizations.csv", std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open for writing: " +
                                         (slot_dir / "realizations.csv").string());
            out << "realization_index,seed,f_r,n_white,sweeps_run\n";
            for (std::uint32_t r = 0; r < config.n_realizations; ++r)
                out << r << ',' << rows[r].seed << ',' << csv::format_double(rows[r].f_r) << ','
                    << rows[r].n_white << ',' << rows[r].sweeps_run << '\n';
            if (!out)
                throw std::runtime_error("write failed: " +
                                         (slot_dir / "realizations.csv").string());
        }

        slot_dirs.push_back(dir_name);
        slot_seconds.push_back(monotonic_seconds(t_slot));
        slot_summaries.push_back(std::move(stats.summary));
        if (config.n_slots >= 2) slot_nodes.push_back(std::move(stats.nodes));
        say("slot " + std::to_string(s + 1) + "/" + std::to_string(config.n_slots) +
            ": mu_0 " + csv::format_double(slot_summaries.back().mu_0) + " (" +
            csv::format_double(slot_seconds.back()) + " s)");
    }

    SlotStats pooled_stats = pooled.finalize(spec.fr_bin_width, spec.mu_bin_width);
    write_nodes_csv(graph, pooled_stats.nodes, pagerank, all_nodes,
                    (out_dir / "nodes.csv").string());

    json summary;
    summary["pooled"] = summary_to_json(pooled_stats.summary);
    json mu0_list = json::array();
    for (const auto& s : slot_summaries) mu0_list.push_back(s.mu_0);
    summary["per_slot_mu0"] = mu0_list;
    if (config.n_slots >= 2) {
        const FluctuationReport fl = fluctuations(slot_summaries, slot_nodes);
        summary["fluctuations"] = json{
            {"sigma_0", fl.sigma_0}, {"sigma_mu", fl.sigma_mu}, {"n_slots", fl.n_slots}};
    }
    summary["pagerank"] = json{{"alpha", pagerank.alpha},
                               {"iterations", pagerank.iterations},
                               {"residual", pagerank.residual}};
    write_json_file(out_dir / "summary.json", summary);

    json manifest;
    manifest["version"] = std::string(kToolVersion);
    manifest["graph"] = json{{"path", spec.graph_path},
                             {"fingerprint", fingerprint_hex(graph.fingerprint())},
                             {"n_nodes", graph.n_nodes()},
                             {"n_edges", graph.n_edges()}};
    manifest["config"] = json{{"red", spec.red_specs},
                              {"blue", spec.blue_specs},
                              {"red_ids", config.red_nodes},
                              {"blue_ids", config.blue_nodes},
                              {"matrix", spec.matrix},
                              {"tau_max", config.tau_max},
                              {"n_realizations", config.n_realizations},
                              {"n_slots", config.n_slots},
                              {"master_seed", config.master_seed},
                              {"early_stop", config.early_stop},
                              {"positive_threshold", config.positive_threshold},
                              {"fr_bin_width", spec.fr_bin_width},
                              {"mu_bin_width", spec.mu_bin_width},
                              {"pagerank_alpha", spec.pagerank_alpha},
                              {"dump_realizations", spec.dump_realizations}};
    manifest["outputs"] =
        json{{"summary", "summary.json"}, {"nodes", "nodes.csv"}, {"slots", slot_dirs}};
    manifest["timings_seconds"] = json{{"pagerank", pagerank_seconds},
                                       {"slots", slot_seconds},
                                       {"total", monotonic_seconds(t_start)}};

    const fs::path manifest_path = out_dir / "manifest.json";
    const fs::path tmp_path = out_dir / "manifest.json.tmp";
    write_json_file(tmp_path, manifest);
    fs::rename(tmp_path, manifest_path);
    say("run complete: " + manifest_path.string());
    return manifest_path.string();
}

void analyze_histogram(const std::string& results_dir, const std::string& which,
                       const std::string& out_csv) {
    if (which != "fr" && which != "mu")
        throw std::invalid_argument("histogram selector must be fr or mu, got '" + which + "'");
    const RunLayout layout = load_layout(results_dir);
    const json summary = read_json_file(layout.summary);
    const json& h = summary.at("pooled").at(which == "fr" ? "fr_histogram" : "mu_histogram");
    const double lo = h.at("lo").get<double>();
    const double width = h.at("width").get<double>();
    const auto counts = h.at("counts").get<std::vector<std::uint64_t>>();
    const auto density = h.at("density").get<std::vector<double>>();

    std::ofstream out(out_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_csv);
    out << "bin_lo,bin_hi,count,density\n";
    for (std::size_t k = 0; k < counts.size(); ++k)
        out << csv::format_double(lo + static_cast<double>(k) * width) << ','
            << csv::format_double(lo + static_cast<double>(k + 1) * width) << ',' << counts[k]
            << ',' << csv::format_double(density[k]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + out_csv);
}

namespace {

struct LoadedSlots {
    std::vector<SlotSummary> summaries;
    std::vector<NodeStats> nodes;
};

LoadedSlots load_slots(const RunLayout& layout) {
    LoadedSlots loaded;
    for (const fs::path& dir : layout.slot_dirs) {
        const json j = read_json_file(dir / "summary.json");
        SlotSummary s;
        s.mu_0 = j.at("mu_0").get<double>();
        s.isolated_fraction = j.at("isolated_fraction").get<double>();
        s.n_realizations = j.at("n_realizations").get<std::uint32_t>();
        loaded.summaries.push_back(std::move(s));
        const std::string nodes_path = (dir / "nodes.csv").string();
        loaded.nodes.push_back(table_to_node_stats(read_nodes_table(nodes_path), nodes_path));
    }
    return loaded;
}

}  // namespace

void analyze_fluctuations(const std::string& results_dir, const std::string& out_json) {
    const RunLayout layout = load_layout(results_dir);
    const LoadedSlots loaded = load_slots(layout);
    const FluctuationReport report = fluctuations(loaded.summaries, loaded.nodes);
    write_json_file(out_json, json{{"sigma_0", report.sigma_0},
                                   {"sigma_mu", report.sigma_mu},
                                   {"n_slots", report.n_slots},
                                   {"per_slot_mu0", report.per_slot_mu0}});
}

void analyze_correlate_slots(const std::string& results_dir, const std::string& out_csv,
                             const std::string& out_json) {
    const RunLayout layout = load_layout(results_dir);
    const LoadedSlots loaded = load_slots(layout);
    const std::size_t n_slots = loaded.nodes.size();
    if (n_slots < 2)
        throw std::invalid_argument("correlate-slots: need at least 2 slots");

    std::ofstream out(out_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_csv);
    out << "slot_a,slot_b,pearson,spearman,kendall\n";
    std::vector<double> pearson, spearman, kendall;
    for (std::size_t a = 0; a < n_slots; ++a) {
        for (std::size_t b = a + 1; b < n_slots; ++b) {
            const auto& x = loaded.nodes[a].mu;
            const auto& y = loaded.nodes[b].mu;
            pearson.push_back(correlate(x, y, CorrelationMethod::pearson));
            spearman.push_back(correlate(x, y, CorrelationMethod::spearman));
            kendall.push_back(correlate(x, y, CorrelationMethod::kendall));
            out << a << ',' << b << ',' << csv::format_double(pearson.back()) << ','
                << csv::format_double(spearman.back()) << ','
                << csv::format_double(kendall.back()) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + out_csv);

    const auto mean_std = [](const std::vector<double>& v) {
        const double mean = kahan_sum(v) / static_cast<double>(v.size());
        const double var = compensated_sum(0, v.size(),
                                           [&](std::size_t i) {
                                               const double d = v[i] - mean;
                                               return d * d;
                                           }) /
                           static_cast<double>(v.size());
        return json{{"mean", mean}, {"std", std::sqrt(var)}};
    };
    write_json_file(out_json, json{{"pearson", mean_std(pearson)},
                                   {"spearman", mean_std(spearman)},
                                   {"kendall", mean_std(kendall)},
                                   {"n_pairs", pearson.size()}});
}

void analyze_covariate(const std::string& results_dir, const std::string& covariate_csv,
                       const std::string& out_json) {
    const RunLayout layout = load_layout(results_dir);
    const NodesTable table = read_nodes_table(layout.nodes.string());
    std::unordered_map<std::string_view, std::size_t> by_title;
    by_title.reserve(table.n_rows());
    for (std::size_t row = 0; row < table.n_rows(); ++row)
        by_title.emplace(table.titles[row], row);  // first occurrence wins

    std::ifstream in(covariate_csv, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + covariate_csv);
    std::vector<double> delta_mu, value;
    std::string line, missing;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = csv::split(line);
        if (fields.size() != 2)
            throw std::runtime_error(covariate_csv + ": line " + std::to_string(line_no) +
                                     ": expected title,value");
        double v = 0.0;
        const auto* end = fields[1].data() + fields[1].size();
        const auto [ptr, ec] = std::from_chars(fields[1].data(), end, v);
        if (ec != std::errc{} || ptr != end) {
            if (line_no == 1) continue;  // header row
            throw std::runtime_error(covariate_csv + ": line " + std::to_string(line_no) +
                                     ": bad numeric field '" + fields[1] + "'");
        }
        const auto it = by_title.find(std::string_view(fields[0]));
        if (it == by_title.end()) {
            if (!missing.empty()) missing += ", ";
            missing += fields[0];
            continue;
        }
        delta_mu.push_back(table.delta_mu[it->second]);
        value.push_back(v);
    }
    if (!missing.empty())
        throw std::invalid_argument("covariate titles not in results: " + missing);
    write_json_file(out_json,
                    json{{"pearson", correlate(delta_mu, value, CorrelationMethod::pearson)},
                         {"spearman", correlate(delta_mu, value, CorrelationMethod::spearman)},
                         {"kendall", correlate(delta_mu, value, CorrelationMethod::kendall)},
                         {"n_pairs", delta_mu.size()}});
}

NodeStats load_node_stats(const std::string& nodes_csv) {
    return table_to_node_stats(read_nodes_table(nodes_csv), nodes_csv);
}

void analyze_report(const std::string& results_dir, const NodeSelection& selection,
                    const std::string& out_csv) {
    const RunLayout layout = load_layout(results_dir);
    const NodesTable table = read_nodes_table(layout.nodes.string());

    std::vector<std::size_t> rows;
    switch (selection.kind) {
        case NodeSelection::Kind::top_k: {
            for (std::size_t row = 0; row < table.n_rows(); ++row)
                if (table.k_index[row] <= selection.k) rows.push_back(row);
            break;
        }
        case NodeSelection::Kind::ids: {
            std::unordered_map<NodeId, std::size_t> by_id;
            by_id.reserve(table.n_rows());
            for (std::size_t row = 0; row < table.n_rows(); ++row)
                by_id.emplace(table.ids[row], row);
            std::string missing;
            for (const NodeId v : selection.ids) {
                const auto it = by_id.find(v);
                if (it == by_id.end()) {
                    if (!missing.empty()) missing += ", ";
                    missing += std::to_string(v);
                } else {
                    rows.push_back(it->second);
                }
            }
            if (!missing.empty())
                throw std::invalid_argument("node ids not in results: " + missing);
            break;
        }
        case NodeSelection::Kind::titles: {
            std::unordered_map<std::string_view, std::size_t> by_title;
            by_title.reserve(table.n_rows());
            for (std::size_t row = 0; row < table.n_rows(); ++row)
                by_title.emplace(table.titles[row], row);
            std::string missing;
            for (const std::string& t : selection.titles) {
                const auto it = by_title.find(std::string_view(t));
                if (it == by_title.end()) {
                    if (!missing.empty()) missing += ", ";
                    missing += t;
                } else {
                    rows.push_back(it->second);
                }
            }
            if (!missing.empty())
                throw std::invalid_argument("unresolved titles: " + missing);
            break;
        }
    }
    std::sort(rows.begin(), rows.end(),
              [&](std::size_t a, std::size_t b) { return table.k_index[a] < table.k_index[b]; });

    std::ofstream out(out_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_csv);
    out << "node_id,title,k_index,mu,delta_mu,white_freq\n";
    for (const std::size_t row : rows)
        out << table.ids[row] << ',' << csv::escape(table.titles[row]) << ','
            << table.k_index[row] << ',' << csv::format_double(table.mu[row]) << ','
            << csv::format_double(table.delta_mu[row]) << ','
            << csv::format_double(table.white_freq[row]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + out_csv);
}

}  // namespace inof
