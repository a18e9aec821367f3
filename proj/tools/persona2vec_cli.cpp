#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "persona2vec/ego_split.hpp"
#include "persona2vec/fetch.hpp"
#include "persona2vec/graph.hpp"
#include "persona2vec/linkpred.hpp"
#include "persona2vec/manifest.hpp"
#include "persona2vec/pipeline.hpp"
#include "persona2vec/sha256.hpp"
#include "persona2vec/skipgram.hpp"

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

struct CommonOptions {
    std::string input;
    bool directed = false;
    std::string clustering = "cc";
    double lambda = 0.5;
    int dim = 128;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string output;

    int base_walks = 10, base_length = 40, base_window = 5, base_epochs = 1;
    int persona_walks = 5, persona_length = 80, persona_window = 2, persona_epochs = 1;
    double alpha = 0.025;
    int negatives = 5;
};

void add_graph_options(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--input", opts.input, "edge list file")->required();
    cmd.add_flag("--directed", opts.directed, "treat edges as directed");
    cmd.add_option("--seed", opts.seed, "random seed")->envname("P2V_SEED");
    cmd.add_option("--threads", opts.threads,
                   "worker threads (0 = deterministic single-threaded)")
        ->envname("P2V_THREADS");
}

void add_split_options(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--clustering", opts.clustering, "ego clustering: cc or lp")
        ->check(CLI::IsMember({"cc", "lp"}));
    cmd.add_option("--lambda", opts.lambda, "persona edge weight factor")
        ->check(CLI::NonNegativeNumber);
}

void add_embedding_options(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--dim", opts.dim, "embedding dimension");
    cmd.add_option("--alpha", opts.alpha, "initial learning rate");
    cmd.add_option("--negatives", opts.negatives, "negative samples per pair");
    cmd.add_option("--base-walks", opts.base_walks, "base walks per node");
    cmd.add_option("--base-length", opts.base_length, "base walk length");
    cmd.add_option("--base-window", opts.base_window, "base window size");
    cmd.add_option("--base-epochs", opts.base_epochs, "base training epochs");
    cmd.add_option("--persona-walks", opts.persona_walks, "persona walks per node");
    cmd.add_option("--persona-length", opts.persona_length, "persona walk length");
    cmd.add_option("--persona-window", opts.persona_window, "persona window size");
    cmd.add_option("--persona-epochs", opts.persona_epochs, "persona training epochs");
}

p2v::Persona2VecConfig make_config(const CommonOptions& opts) {
    p2v::Persona2VecConfig cfg;
    cfg.lambda = opts.lambda;
    cfg.dim = opts.dim;
    cfg.base = {opts.base_walks, opts.base_length, opts.base_window, opts.base_epochs};
    cfg.persona = {opts.persona_walks, opts.persona_length, opts.persona_window,
                   opts.persona_epochs};
    cfg.alpha = opts.alpha;
    cfg.negatives = opts.negatives;
    cfg.clustering = p2v::parse_clustering(opts.clustering);
    cfg.seed = opts.seed;
    cfg.threads = opts.threads;
    return cfg;
}

json config_json(const p2v::Persona2VecConfig& cfg) {
    return json{
        {"lambda", cfg.lambda},
        {"dim", cfg.dim},
        {"base",
         {{"walks_per_node", cfg.base.walks_per_node},
          {"walk_length", cfg.base.walk_length},
          {"window", cfg.base.window},
          {"epochs", cfg.base.epochs}}},
        {"persona",
         {{"walks_per_node", cfg.persona.walks_per_node},
          {"walk_length", cfg.persona.walk_length},
          {"window", cfg.persona.window},
          {"epochs", cfg.persona.epochs}}},
        {"alpha", cfg.alpha},
        {"negatives", cfg.negatives},
        {"clustering",
         cfg.clustering == p2v::LocalClustering::connected_components ? "cc" : "lp"},
        {"seed", cfg.seed},
        {"threads", cfg.threads},
    };
}

std::string default_prefix(const CommonOptions& opts) {
    if (!opts.output.empty()) return opts.output;
    return std::filesystem::path(opts.input).stem().string();
}

// Loads, reports dropped lines, and cuts to the largest (weakly)
// connected component when the input is not connected.
p2v::Graph load_input(const CommonOptions& opts) {
    p2v::Graph g = p2v::load_edge_list(opts.input, opts.directed);
    if (g.self_loops_dropped() > 0)
        std::cerr << "warning: dropped " << g.self_loops_dropped() << " self-loops\n";
    if (g.duplicates_merged() > 0)
        std::cerr << "warning: merged " << g.duplicates_merged()
                  << " duplicate edges (weights summed)\n";
    if (!p2v::is_connected(g)) {
        p2v::Graph lcc = p2v::largest_component(g);
        std::cerr << "input not connected; using largest component: " << lcc.num_nodes()
                  << "/" << g.num_nodes() << " nodes, " << lcc.num_edges() << "/"
                  << g.num_edges() << " edges\n";
        return lcc;
    }
    return g;
}

int run_split(const CommonOptions& opts) {
    const auto started = std::chrono::steady_clock::now();
    p2v::Graph g = load_input(opts);
    p2v::PersonaGraph pg = p2v::build_persona_graph(
        g, p2v::parse_clustering(opts.clustering), opts.lambda, opts.seed);

    const std::string prefix = default_prefix(opts);
    const std::string map_path = prefix + ".personas.tsv";
    p2v::save_persona_map(pg, map_path);

    const auto report = p2v::persona_edge_bound_check(pg);
    std::cout << "nodes " << g.num_nodes() << ", edges " << g.num_edges()
              << ", personas " << pg.num_personas() << ", persona arcs "
              << report.persona_arcs << " (pairs " << report.persona_pairs << ")\n";
    std::cout << "bound |E|^1.5 = " << report.edge_bound << ", max degree "
              << report.max_degree << ", sqrt|E| = " << report.sqrt_edges
              << (report.degree_condition
                      ? (report.within_bound ? ", bound holds" : ", bound VIOLATED")
                      : ", degree condition not met (bound not asserted)")
              << "\n";

    p2v::RunManifest manifest;
    manifest.command = "split";
    manifest.config = {{"lambda", opts.lambda},
                       {"clustering", opts.clustering},
                       {"directed", opts.directed},
                       {"seed", opts.seed}};
    manifest.input_path = opts.input;
    manifest.input_sha256 = p2v::Sha256::of_file(opts.input);
    manifest.seed = opts.seed;
    manifest.add_artifact(map_path);
    manifest.timings_s.push_back({"total", seconds_since(started)});
    manifest.save(prefix + ".manifest.json");
    return 0;
}

int run_embed(const CommonOptions& opts, bool no_split) {
    const auto started = std::chrono::steady_clock::now();
    p2v::Graph g = load_input(opts);
    p2v::Persona2VecConfig cfg = make_config(opts);

    const std::string prefix = default_prefix(opts);
    const std::string emb_path = prefix + ".emb";

    p2v::RunManifest manifest;
    manifest.command = "embed";
    manifest.config = config_json(cfg);
    manifest.config["no_split"] = no_split;
    manifest.input_path = opts.input;
    manifest.input_sha256 = p2v::Sha256::of_file(opts.input);
    manifest.seed = opts.seed;

    if (no_split) {
        p2v::EmbeddingMatrix emb = p2v::embed_baseline(g, cfg);
        std::vector<std::string> labels;
        labels.reserve(g.num_nodes());
        for (p2v::NodeId v = 0; v < g.num_nodes(); ++v)
            labels.push_back(std::to_string(g.label(v)));
        p2v::save_embedding(emb, labels, emb_path);
        manifest.add_artifact(emb_path);
    } else {
        p2v::Persona2VecResult result = p2v::persona2vec(g, cfg);
        p2v::save_embedding(result.embedding, result.personas.persona_labels(), emb_path);
        const std::string map_path = prefix + ".personas.tsv";
        p2v::save_persona_map(result.personas, map_path);
        manifest.add_artifact(emb_path);
        manifest.add_artifact(map_path);
        manifest.timings_s = {{"split", result.timings.split_s},
                              {"base_walk", result.timings.base_walk_s},
                              {"base_train", result.timings.base_train_s},
                              {"persona_walk", result.timings.persona_walk_s},
                              {"persona_train", result.timings.persona_train_s}};
        std::cout << "personas " << result.personas.num_personas() << "\n";
    }
    manifest.timings_s.push_back({"total", seconds_since(started)});
    manifest.save(prefix + ".manifest.json");
    std::cout << "wrote " << emb_path << "\n";
    return 0;
}

int run_linkpred(const CommonOptions& opts, const p2v::LinkPredConfig& lp,
                 std::string report_path) {
    const auto started = std::chrono::steady_clock::now();
    p2v::Graph g = load_input(opts);
    p2v::Persona2VecConfig cfg = make_config(opts);

    p2v::EvalResult result = p2v::run_experiment(g, cfg, lp);

    if (report_path.empty()) report_path = default_prefix(opts) + ".linkpred.json";
    json doc;
    doc["schema_version"] = 1;
    doc["dataset"] = {{"path", opts.input},
                      {"sha256", p2v::Sha256::of_file(opts.input)},
                      {"nodes", g.num_nodes()},
                      {"edges", g.num_edges()},
                      {"directed", g.directed()}};
    doc["config"] = config_json(cfg);
    doc["config"]["test_fraction"] = lp.test_fraction;
    doc["config"]["num_seeds"] = lp.num_seeds;
    doc["config"]["agg"] = lp.agg == p2v::Aggregation::max
                               ? "max"
                               : (lp.agg == p2v::Aggregation::min ? "min" : "mean");
    doc["config"]["no_split"] = lp.no_split;
    auto& runs = doc["runs"] = json::array();
    for (const p2v::SeedRun& run : result.runs) {
        runs.push_back({{"seed", run.seed},
                        {"auc", run.auc},
                        {"n_train", run.n_train},
                        {"n_test", run.n_test},
                        {"n_negative", run.n_negative},
                        {"n_personas", run.n_personas},
                        {"timings_s",
                         {{"split_edges", run.split_edges_s},
                          {"persona_split", run.timings.split_s},
                          {"base_walk", run.timings.base_walk_s},
                          {"base_train", run.timings.base_train_s},
                          {"persona_walk", run.timings.persona_walk_s},
                          {"persona_train", run.timings.persona_train_s},
                          {"score", run.score_s}}}});
    }
    doc["auc"] = result.mean_auc;
    doc["auc_stderr"] = result.stderr_auc;
    doc["wall_s"] = seconds_since(started);

    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + report_path);
    out << doc.dump(2) << '\n';
    out.close();

    p2v::RunManifest manifest;
    manifest.command = "linkpred";
    manifest.config = doc["config"];
    manifest.input_path = opts.input;
    manifest.input_sha256 = doc["dataset"]["sha256"];
    manifest.seed = opts.seed;
    manifest.add_artifact(report_path);
    manifest.timings_s.push_back({"total", doc["wall_s"]});
    manifest.save(report_path + ".manifest.json");

    std::cout << "auc " << result.mean_auc << " +/- " << result.stderr_auc << " over "
              << result.runs.size() << " seeds\n";
    return 0;
}

int run_fetch(const std::string& dataset, const std::string& out_dir, bool force) {
    std::vector<p2v::DatasetSpec> wanted;
    if (dataset == "all") {
        wanted = p2v::dataset_registry();
    } else {
        wanted.push_back(p2v::dataset_by_name(dataset));
    }
    for (const p2v::DatasetSpec& spec : wanted) {
        std::cout << "fetching " << spec.name << " from " << spec.url << "\n";
        p2v::FetchResult result = p2v::fetch_dataset(spec, out_dir, force);
        if (result.raw_sha256.empty()) {
            std::cout << "  already present: " << result.edge_list_path << "\n";
            continue;
        }
        std::cout << "  wrote " << result.edge_list_path << "\n";
        std::cout << "  raw sha256 " << result.raw_sha256
                  << (result.checksum_verified
                          ? " (verified)"
                          : (spec.sha256.empty() ? " (no pin recorded)" : ""))
                  << "\n";
        p2v::RunManifest manifest;
        manifest.command = "fetch";
        manifest.config = {{"dataset", spec.name}, {"url", spec.url}};
        manifest.input_path = spec.url;
        manifest.input_sha256 = result.raw_sha256;
        manifest.add_artifact(result.edge_list_path);
        manifest.save(result.edge_list_path + ".manifest.json");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persona2vec: multi-role graph embeddings via ego-splitting"};
    app.require_subcommand(1);

    CommonOptions opts;

    CLI::App* split = app.add_subcommand("split", "build and export the persona graph");
    add_graph_options(*split, opts);
    add_split_options(*split, opts);
    split->add_option("--output", opts.output, "output prefix");

    CLI::App* embed = app.add_subcommand("embed", "train persona embeddings");
    bool no_split = false;
    add_graph_options(*embed, opts);
    add_split_options(*embed, opts);
    add_embedding_options(*embed, opts);
    embed->add_flag("--no-split", no_split, "plain single-vector baseline embedding");
    embed->add_option("--output", opts.output, "output prefix");

    CLI::App* linkpred = app.add_subcommand("linkpred", "link-prediction evaluation");
    p2v::LinkPredConfig lp;
    std::string agg = "max";
    std::string report_path;
    add_graph_options(*linkpred, opts);
    add_split_options(*linkpred, opts);
    add_embedding_options(*linkpred, opts);
    linkpred->add_option("--seeds", lp.num_seeds, "number of evaluation seeds");
    linkpred->add_option("--test-fraction", lp.test_fraction, "held-out edge fraction");
    linkpred->add_option("--agg", agg, "persona score aggregation")
        ->check(CLI::IsMember({"max", "min", "mean"}));
    linkpred->add_flag("--no-split", lp.no_split, "evaluate the no-split baseline");
    linkpred->add_option("--report", report_path, "JSON report path");
    linkpred->add_option("--output", opts.output, "output prefix");

    CLI::App* fetch = app.add_subcommand("fetch", "download benchmark datasets");
    std::string dataset = "all";
    std::string out_dir = "data";
    bool force = false;
    fetch->add_option("--dataset", dataset, "dataset name or 'all'");
    fetch->add_option("--output-dir", out_dir, "download directory")
        ->envname("P2V_DATA_DIR");
    fetch->add_flag("--force", force, "re-download even if present");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (split->parsed()) return run_split(opts);
        if (embed->parsed()) return run_embed(opts, no_split);
        if (linkpred->parsed()) {
            lp.agg = p2v::parse_aggregation(agg);
            return run_linkpred(opts, lp, report_path);
        }
        if (fetch->parsed()) return run_fetch(dataset, out_dir, force);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
