#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "persona2vec/ego_split.hpp"
#include "persona2vec/graph.hpp"
#include "persona2vec/linkpred.hpp"
#include "persona2vec/pipeline.hpp"
#include "persona2vec/skipgram.hpp"

namespace py = pybind11;
using namespace p2v;

namespace {

py::array_t<double> matrix_to_numpy(const EmbeddingMatrix& emb) {
    py::array_t<double> out({emb.rows, emb.dim});
    std::copy(emb.phi_in.begin(), emb.phi_in.end(), out.mutable_data());
    return out;
}

Persona2VecConfig config_from_kwargs(double lambda, int dim, std::uint64_t seed,
                                     const std::string& clustering, int threads,
                                     int base_walks, int base_length, int base_window,
                                     int persona_walks, int persona_length,
                                     int persona_window) {
    Persona2VecConfig cfg;
    cfg.lambda = lambda;
    cfg.dim = dim;
    cfg.seed = seed;
    cfg.clustering = parse_clustering(clustering);
    cfg.threads = threads;
    cfg.base = {base_walks, base_length, base_window, 1};
    cfg.persona = {persona_walks, persona_length, persona_window, 1};
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_persona2vec, m) {
    m.doc() = "Multi-role graph embeddings via ego-splitting";

    py::class_<Graph>(m, "Graph")
        .def_property_readonly("num_nodes", &Graph::num_nodes)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def_property_readonly("directed", &Graph::directed)
        .def("labels", [](const Graph& g) { return g.labels(); })
        .def("edges",
             [](const Graph& g) {
                 std::vector<std::tuple<NodeId, NodeId, double>> out;
                 out.reserve(g.num_edges());
                 for (const Edge& e : g.edges()) out.emplace_back(e.src, e.dst, e.weight);
                 return out;
             })
        .def("__repr__", [](const Graph& g) {
            return "<Graph nodes=" + std::to_string(g.num_nodes()) +
                   " edges=" + std::to_string(g.num_edges()) +
                   (g.directed() ? " directed>" : ">");
        });

    m.def("load_edge_list", &load_edge_list, py::arg("path"), py::arg("directed") = false);
    m.def("largest_component", &largest_component, py::arg("graph"));
    m.def(
        "from_edges",
        [](NodeId n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges,
           bool directed) {
            std::vector<Edge> converted;
            converted.reserve(edges.size());
            for (const auto& [u, v, w] : edges) converted.push_back({u, v, w});
            return Graph(n, directed, std::move(converted));
        },
        py::arg("num_nodes"), py::arg("edges"), py::arg("directed") = false);

    m.def(
        "split_personas",
        [](const Graph& g, const std::string& clustering, double lambda,
           std::uint64_t seed) {
            PersonaGraph pg =
                build_persona_graph(g, parse_clustering(clustering), lambda, seed);
            py::dict out;
            out["num_personas"] = pg.num_personas();
            out["persona_arcs"] = pg.persona_arc_count();
            out["v2p"] = pg.v2p;
            out["labels"] = pg.persona_labels();
            const auto bound = persona_edge_bound_check(pg);
            out["edge_bound"] = bound.edge_bound;
            out["within_bound"] = bound.within_bound;
            return out;
        },
        py::arg("graph"), py::arg("clustering") = "cc", py::arg("lambda_") = 0.5,
        py::arg("seed") = 0);

    m.def(
        "embed",
        [](const Graph& g, double lambda, int dim, std::uint64_t seed,
           const std::string& clustering, int threads, int base_walks, int base_length,
           int base_window, int persona_walks, int persona_length, int persona_window) {
            const Persona2VecConfig cfg = config_from_kwargs(
                lambda, dim, seed, clustering, threads, base_walks, base_length,
                base_window, persona_walks, persona_length, persona_window);
            Persona2VecResult result = persona2vec(g, cfg);
            py::dict out;
            out["embedding"] = matrix_to_numpy(result.embedding);
            out["labels"] = result.personas.persona_labels();
            out["v2p"] = result.personas.v2p;
            return out;
        },
        py::arg("graph"), py::arg("lambda_") = 0.5, py::arg("dim") = 128,
        py::arg("seed") = 0, py::arg("clustering") = "cc", py::arg("threads") = 0,
        py::arg("base_walks") = 10, py::arg("base_length") = 40,
        py::arg("base_window") = 5, py::arg("persona_walks") = 5,
        py::arg("persona_length") = 80, py::arg("persona_window") = 2);

    m.def(
        "embed_baseline",
        [](const Graph& g, int dim, std::uint64_t seed, int threads, int base_walks,
           int base_length, int base_window) {
            Persona2VecConfig cfg;
            cfg.dim = dim;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.base = {base_walks, base_length, base_window, 1};
            return matrix_to_numpy(embed_baseline(g, cfg));
        },
        py::arg("graph"), py::arg("dim") = 128, py::arg("seed") = 0,
        py::arg("threads") = 0, py::arg("base_walks") = 10, py::arg("base_length") = 40,
        py::arg("base_window") = 5);

    m.def(
        "link_prediction",
        [](const Graph& g, double lambda, int dim, std::uint64_t seed,
           const std::string& clustering, int threads, std::size_t num_seeds,
           double test_fraction, const std::string& agg, bool no_split) {
            Persona2VecConfig cfg;
            cfg.lambda = lambda;
            cfg.dim = dim;
            cfg.seed = seed;
            cfg.clustering = parse_clustering(clustering);
            cfg.threads = threads;
            LinkPredConfig lp;
            lp.num_seeds = num_seeds;
            lp.test_fraction = test_fraction;
            lp.agg = parse_aggregation(agg);
            lp.no_split = no_split;
            EvalResult result = run_experiment(g, cfg, lp);
            py::dict out;
            out["auc"] = result.mean_auc;
            out["auc_stderr"] = result.stderr_auc;
            py::list runs;
            for (const SeedRun& run : result.runs) {
                py::dict entry;
                entry["seed"] = run.seed;
                entry["auc"] = run.auc;
                entry["n_test"] = run.n_test;
                entry["n_personas"] = run.n_personas;
                runs.append(entry);
            }
            out["runs"] = runs;
            return out;
        },
        py::arg("graph"), py::arg("lambda_") = 0.5, py::arg("dim") = 128,
        py::arg("seed") = 0, py::arg("clustering") = "cc", py::arg("threads") = 0,
        py::arg("num_seeds") = 5, py::arg("test_fraction") = 0.5, py::arg("agg") = "max",
        py::arg("no_split") = false);

    m.def("roc_auc", [](const std::vector<double>& pos, const std::vector<double>& neg) {
        return roc_auc(pos, neg);
    });
}
