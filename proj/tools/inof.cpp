// inof: opinion-dynamics simulations on directed graphs.
//
// Subcommands:
//   ingest    edge list (+ optional titles) -> binary graph cache
//   pagerank  ranking CSV for a graph
//   simulate  seeded multi-slot simulation with per-slot and pooled outputs
//   distance  hop counts from the fixed groups, joint counts, profile
//   analyze   post-hoc statistics over a finished simulation directory

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "inof/distance.hpp"
#include "inof/experiment.hpp"
#include "inof/graph.hpp"
#include "inof/pagerank.hpp"
#include "inof/parallel.hpp"
#include "inof/stats.hpp"

namespace fs = std::filesystem;

namespace {

bool is_binary_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    return in.gcount() == 4 && magic[0] == 'I' && magic[1] == 'N' && magic[2] == 'O' &&
           magic[3] == 'F';
}

// Accepts either a binary cache produced by `inof ingest` or a raw edge list
// (optionally with a titles file).
inof::DirectedGraph load_graph_any(const std::string& path, const std::string& titles_path) {
    if (is_binary_cache(path)) {
        if (!titles_path.empty())
            throw std::runtime_error("--titles only applies to raw edge lists; the binary "
                                     "cache already carries titles");
        return inof::load_binary(path);
    }
    auto ingested = inof::ingest_edge_list(path, titles_path);
    for (const std::string& w : ingested.report.warnings)
        std::cerr << "warning: " << w << '\n';
    return std::move(ingested.graph);
}

void print_load_report(const inof::LoadReport& report) {
    std::cout << "nodes: " << report.n_nodes << '\n'
              << "edges kept: " << report.n_edges_kept << '\n'
              << "self loops dropped: " << report.n_self_loops_dropped << '\n'
              << "duplicate edges merged: " << report.n_duplicate_edges_merged << '\n'
              << "dangling nodes: " << report.n_dangling_nodes << '\n';
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<std::string> read_title_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::string> titles;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) titles.push_back(line);
    }
    return titles;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Opinion-formation simulations on directed graphs"};
    app.require_subcommand(1);

    // ingest
    std::string in_edges, in_titles, in_out;
    auto* ingest = app.add_subcommand("ingest", "Build a binary graph cache from an edge list");
    ingest->add_option("--edges", in_edges, "Edge list: one 'src dst' pair per line")
        ->required();
    ingest->add_option("--titles", in_titles, "Titles file: line i+1 names node i");
    ingest->add_option("--out", in_out, "Output cache path")->required();

    // pagerank
    std::string pr_graph, pr_titles, pr_out;
    double pr_alpha = 0.85, pr_tol = 1e-12;
    std::uint32_t pr_max_iter = 1000;
    std::size_t pr_threads = 0;
    auto* pagerank = app.add_subcommand("pagerank", "Rank nodes and write the ordering CSV");
    pagerank->add_option("--graph", pr_graph, "Graph cache or edge list")->required();
    pagerank->add_option("--titles", pr_titles, "Titles file (raw edge lists only)");
    pagerank->add_option("--alpha", pr_alpha, "Damping factor in (0,1)");
    pagerank->add_option("--tol", pr_tol, "L1 convergence threshold");
    pagerank->add_option("--max-iter", pr_max_iter, "Iteration cap");
    pagerank->add_option("--threads", pr_threads, "Worker threads (0 = auto, INOF_THREADS)");
    pagerank->add_option("--out", pr_out, "Output CSV path")->required();

    // simulate
    inof::ExperimentSpec spec;
    std::string sim_config, sim_titles, sim_matrix = "adjacency";
    std::vector<std::string> sim_red, sim_blue;
    std::string sim_graph, sim_out;
    std::uint32_t sim_tau = 20, sim_realizations = 1000, sim_slots = 1;
    std::uint64_t sim_seed = 0;
    std::size_t sim_threads = 0;
    bool sim_early_stop = false, sim_dump = false;
    double sim_positive_threshold = 0.0;
    double sim_fr_width = inof::kFrBinWidth, sim_mu_width = inof::kMuBinWidth;
    double sim_pr_alpha = 0.85;
    auto* simulate = app.add_subcommand("simulate", "Run seeded opinion-dynamics slots");
    simulate->add_option("--config", sim_config, "JSON config file; flags override its values");
    simulate->add_option("--graph", sim_graph, "Graph cache or edge list");
    simulate->add_option("--titles", sim_titles, "Titles file (raw edge lists only)");
    simulate->add_option("--red", sim_red, "Red fixed nodes: exact titles or #<id>");
    simulate->add_option("--blue", sim_blue, "Blue fixed nodes: exact titles or #<id>");
    simulate->add_option("--matrix", sim_matrix, "adjacency | stochastic");
    simulate->add_option("--tau", sim_tau, "Sweeps per realization");
    simulate->add_option("--realizations", sim_realizations, "Realizations per slot");
    simulate->add_option("--slots", sim_slots, "Number of slots");
    simulate->add_option("--seed", sim_seed, "Master seed");
    simulate->add_option("--threads", sim_threads, "Worker threads (0 = auto, INOF_THREADS)");
    simulate->add_flag("--early-stop", sim_early_stop,
                       "Stop a realization after a zero-flip sweep");
    simulate->add_flag("--dump-realizations", sim_dump,
                       "Write per-realization rows next to each slot summary");
    simulate->add_option("--fr-bin-width", sim_fr_width, "f_r histogram bin width");
    simulate->add_option("--mu-bin-width", sim_mu_width, "mu histogram bin width");
    simulate->add_option("--pagerank-alpha", sim_pr_alpha, "Damping factor for the ranking");
    simulate->add_option("--positive-threshold", sim_positive_threshold,
                         "Influence score needed to turn red (sensitivity knob)")
        ->group("");
    simulate->add_option("--out", sim_out, "Output directory");

    // distance
    std::string d_graph, d_titles, d_out, d_results, d_direction = "forward";
    std::vector<std::string> d_red, d_blue;
    auto* distance = app.add_subcommand("distance", "Hop counts from the fixed groups");
    distance->add_option("--graph", d_graph, "Graph cache or edge list")->required();
    distance->add_option("--titles", d_titles, "Titles file (raw edge lists only)");
    distance->add_option("--red", d_red, "Red fixed nodes: exact titles or #<id>")->required();
    distance->add_option("--blue", d_blue, "Blue fixed nodes: exact titles or #<id>")
        ->required();
    distance->add_option("--direction", d_direction, "forward | reverse");
    distance->add_option("--results", d_results,
                         "Simulation directory; adds the distance-resolved profile CSV");
    distance->add_option("--out", d_out, "Output directory")->required();

    // analyze
    std::string a_results, a_histogram, a_covariate, a_titles_file, a_out;
    bool a_fluctuations = false, a_correlate = false;
    std::uint32_t a_top_k = 0;
    auto* analyze = app.add_subcommand("analyze", "Statistics over a finished simulation");
    analyze->add_option("--results", a_results, "Simulation output directory")->required();
    analyze->add_option("--histogram", a_histogram, "fr | mu: write the pooled histogram CSV");
    analyze->add_flag("--fluctuations", a_fluctuations,
                      "Write slot-to-slot variability JSON (needs >= 2 slots)");
    analyze->add_flag("--correlate-slots", a_correlate,
                      "Write pairwise slot correlation CSV + summary JSON");
    analyze->add_option("--covariate", a_covariate,
                        "title,value CSV to correlate against per-node delta_mu");
    analyze->add_option("--top-k", a_top_k, "Write the top-K ranked rows to report.csv");
    analyze->add_option("--select-titles", a_titles_file,
                        "File of titles (one per line) to report");
    analyze->add_option("--out", a_out, "Output directory (default: the results directory)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            auto ingested = inof::ingest_edge_list(in_edges, in_titles);
            inof::save_binary(ingested.graph, in_out);
            print_load_report(ingested.report);
            std::cout << "cache: " << in_out << '\n';
            return 0;
        }

        if (*pagerank) {
            const inof::DirectedGraph graph = load_graph_any(pr_graph, pr_titles);
            const inof::PageRankResult result =
                inof::compute_pagerank(graph, pr_alpha, pr_tol, pr_max_iter, pr_threads);
            std::cerr << "converged in " << result.iterations << " iterations\n";
            inof::write_pagerank_csv(graph, result, pr_out);
            std::cout << "ranking: " << pr_out << '\n';
            return 0;
        }

        if (*simulate) {
            if (!sim_config.empty()) spec = inof::ExperimentSpec::from_json_file(sim_config);
            const auto override_if = [&](const char* flag, auto& dst, const auto& src) {
                if (simulate->count(flag)) dst = src;
            };
            override_if("--graph", spec.graph_path, sim_graph);
            override_if("--red", spec.red_specs, sim_red);
            override_if("--blue", spec.blue_specs, sim_blue);
            override_if("--matrix", spec.matrix, sim_matrix);
            override_if("--tau", spec.tau_max, sim_tau);
            override_if("--realizations", spec.n_realizations, sim_realizations);
            override_if("--slots", spec.n_slots, sim_slots);
            override_if("--seed", spec.master_seed, sim_seed);
            override_if("--threads", spec.n_threads, sim_threads);
            override_if("--early-stop", spec.early_stop, sim_early_stop);
            override_if("--dump-realizations", spec.dump_realizations, sim_dump);
            override_if("--fr-bin-width", spec.fr_bin_width, sim_fr_width);
            override_if("--mu-bin-width", spec.mu_bin_width, sim_mu_width);
            override_if("--pagerank-alpha", spec.pagerank_alpha, sim_pr_alpha);
            override_if("--positive-threshold", spec.positive_threshold,
                        sim_positive_threshold);
            override_if("--out", spec.out_dir, sim_out);
            if (spec.graph_path.empty())
                throw std::runtime_error("no graph given (--graph or config key 'graph')");
            if (spec.out_dir.empty())
                throw std::runtime_error("no output directory given (--out or config key 'out')");

            const inof::DirectedGraph graph = load_graph_any(spec.graph_path, sim_titles);
            const std::string manifest = inof::run_experiment(
                graph, spec, [](const std::string& line) { std::cerr << line << '\n'; });
            std::cout << "manifest: " << manifest << '\n';
            return 0;
        }

        if (*distance) {
            inof::BfsDirection direction;
            if (d_direction == "forward")
                direction = inof::BfsDirection::forward;
            else if (d_direction == "reverse")
                direction = inof::BfsDirection::reverse;
            else
                throw std::runtime_error("unknown direction '" + d_direction +
                                         "' (expected forward or reverse)");
            const inof::DirectedGraph graph = load_graph_any(d_graph, d_titles);
            const auto red = inof::resolve_nodes(graph, d_red);
            const auto blue = inof::resolve_nodes(graph, d_blue);
            const auto d_r = inof::bfs_from_group(graph, red, direction);
            const auto d_b = inof::bfs_from_group(graph, blue, direction);

            fs::create_directories(d_out);
            const fs::path out_dir(d_out);
            inof::write_distances_csv(graph, d_r, d_b, (out_dir / "distances.csv").string());
            inof::write_joint_counts_csv(inof::joint_distance_counts(d_r, d_b),
                                         (out_dir / "joint_counts.csv").string());
            std::cout << "distances: " << (out_dir / "distances.csv").string() << '\n'
                      << "joint counts: " << (out_dir / "joint_counts.csv").string() << '\n';
            if (!d_results.empty()) {
                // Join distances against the simulation's pooled per-node stats.
                const inof::NodeStats stats =
                    inof::load_node_stats((fs::path(d_results) / "nodes.csv").string());
                if (stats.mu.size() != graph.n_nodes())
                    throw std::runtime_error("--results covers " +
                                             std::to_string(stats.mu.size()) +
                                             " nodes but the graph has " +
                                             std::to_string(graph.n_nodes()));
                inof::write_distance_profile_csv(inof::delta_mu_by_distance(d_r, d_b, stats),
                                                 (out_dir / "profile.csv").string());
                std::cout << "profile: " << (out_dir / "profile.csv").string() << '\n';
            }
            return 0;
        }

        if (*analyze) {
            const fs::path out_dir = a_out.empty() ? fs::path(a_results) : fs::path(a_out);
            fs::create_directories(out_dir);
            bool did_anything = false;
            if (!a_histogram.empty()) {
                const fs::path out = out_dir / ("hist_" + a_histogram + ".csv");
                inof::analyze_histogram(a_results, a_histogram, out.string());
                std::cout << "histogram: " << out.string() << '\n';
                did_anything = true;
            }
            if (a_fluctuations) {
                const fs::path out = out_dir / "fluctuations.json";
                inof::analyze_fluctuations(a_results, out.string());
                std::cout << "fluctuations: " << out.string() << '\n';
                did_anything = true;
            }
            if (a_correlate) {
                const fs::path csv_out = out_dir / "slot_correlations.csv";
                const fs::path json_out = out_dir / "slot_correlations_summary.json";
                inof::analyze_correlate_slots(a_results, csv_out.string(), json_out.string());
                std::cout << "slot correlations: " << csv_out.string() << '\n'
                          << "summary: " << json_out.string() << '\n';
                did_anything = true;
            }
            if (!a_covariate.empty()) {
                const fs::path out = out_dir / "covariate_correlation.json";
                inof::analyze_covariate(a_results, a_covariate, out.string());
                std::cout << "covariate correlation: " << out.string() << '\n';
                did_anything = true;
            }
            if (a_top_k > 0 || !a_titles_file.empty()) {
                inof::NodeSelection selection;
                if (!a_titles_file.empty()) {
                    selection.kind = inof::NodeSelection::Kind::titles;
                    selection.titles = read_title_lines(a_titles_file);
                } else {
                    selection.kind = inof::NodeSelection::Kind::top_k;
                    selection.k = a_top_k;
                }
                const fs::path out = out_dir / "report.csv";
                inof::analyze_report(a_results, selection, out.string());
                std::cout << "report: " << out.string() << '\n';
                did_anything = true;
            }
            if (!did_anything)
                throw std::runtime_error(
                    "nothing to do: pass --histogram, --fluctuations, --correlate-slots, "
                    "--covariate, --top-k, or --select-titles");
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
