#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "persona2vec/linkpred.hpp"
#include "support/test_util.hpp"

using namespace p2v;
using namespace testutil;

namespace {

// Traversal over explicit train-edge adjacency, independent of
// p2v::is_connected.
bool train_graph_connected(const Graph& g, const std::vector<Edge>& train) {
    std::vector<std::vector<NodeId>> adj(g.num_nodes());
    for (const Edge& e : train) {
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    std::vector<char> seen(g.num_nodes(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : adj[v]) {
            if (!seen[u]) {
                seen[u] = 1;
                ++visited;
                stack.push_back(u);
            }
        }
    }
    return visited == g.num_nodes();
}

std::set<std::pair<NodeId, NodeId>> edge_set(const Graph& g) {
    std::set<std::pair<NodeId, NodeId>> set;
    for (const Edge& e : g.edges()) set.insert({e.src, e.dst});
    return set;
}

}  // namespace

TEST_SUITE_BEGIN("linkpred");

TEST_CASE("split: triangle gives exactly one test edge") {
    Graph tri = triangle();
    LinkPredSplit split = split_edges(tri, 1.0 / 3.0, 4);
    CHECK(split.test_edges.size() == 1);
    CHECK(split.train_edges.size() == 2);
    CHECK(split.reached_target);
}

TEST_CASE("split: spanning tree has no removable edges") {
    CHECK_THROWS_WITH_AS(split_edges(star_graph(5), 0.5, 0),
                         doctest::Contains("no removable edges"), std::runtime_error);
    CHECK_THROWS_AS(split_edges(path_graph(6), 0.5, 1), std::runtime_error);
}

TEST_CASE("split: invalid fraction and disconnected input rejected") {
    CHECK_THROWS_AS(split_edges(triangle(), 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(split_edges(triangle(), 1.0, 0), std::invalid_argument);
    Graph disconnected(4, false, {{0, 1, 1}, {2, 3, 1}});
    CHECK_THROWS_AS(split_edges(disconnected, 0.5, 0), std::invalid_argument);
}

TEST_CASE("split: train graph stays connected for every seed") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = erdos_renyi(40, 120, 500 + seed);
        if (!is_connected(g)) g = largest_component(g);
        LinkPredSplit split = split_edges(g, 0.5, seed);
        CHECK(train_graph_connected(g, split.train_edges));
        CHECK(split.train_edges.size() + split.test_edges.size() == g.num_edges());

        // no leakage: test edges are disjoint from the train set
        std::set<std::pair<NodeId, NodeId>> train_set;
        for (const Edge& e : split.train_edges) train_set.insert({e.src, e.dst});
        for (const Edge& e : split.test_edges)
            CHECK(train_set.count({e.src, e.dst}) == 0);
    }
}

TEST_CASE("split: short of target emits a partial test set") {
    // Barbell-ish: two triangles joined by a long path of bridges. Only
    // the two triangle edges are removable, so a 0.5 target is unreachable.
    Graph g(8, false,
            {{0, 1, 1},
             {1, 2, 1},
             {0, 2, 1},
             {2, 3, 1},
             {3, 4, 1},
             {4, 5, 1},
             {5, 6, 1},
             {6, 7, 1},
             {5, 7, 1}});
    LinkPredSplit split = split_edges(g, 0.5, 3);
    CHECK_FALSE(split.reached_target);
    CHECK(split.test_edges.size() == 2);
    CHECK(train_graph_connected(g, split.train_edges));
}

TEST_CASE("negatives: complete graph errors") {
    Graph k4(4, false,
             {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    CHECK_THROWS_WITH_AS(sample_negatives(k4, 1, 0),
                         doctest::Contains("no negative pairs available"),
                         std::runtime_error);
}

TEST_CASE("negatives: empty graph yields all pairs") {
    Graph empty3(3, false, {});
    auto negatives = sample_negatives(empty3, 3, 1);
    std::set<std::pair<NodeId, NodeId>> set(negatives.begin(), negatives.end());
    CHECK(set == std::set<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("negatives: never collide with edges or themselves") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const bool directed = seed % 3 == 0;
        Graph g = erdos_renyi(12 + seed % 9, 20 + seed % 13, 8000 + seed, directed);
        const auto existing = edge_set(g);
        auto negatives = sample_negatives(g, 10, seed);
        std::set<std::pair<NodeId, NodeId>> seen;
        for (auto [u, v] : negatives) {
            CHECK(u != v);
            CHECK(existing.count({u, v}) == 0);
            if (!directed) CHECK(existing.count({v, u}) == 0);
            CHECK(seen.insert({u, v}).second);
        }
    }
}

TEST_CASE("negatives: directed pairs are ordered") {
    Graph g(3, true, {{0, 1, 1}});
    auto negatives = sample_negatives(g, 5, 2);
    std::set<std::pair<NodeId, NodeId>> set(negatives.begin(), negatives.end());
    // 5 of (1,0),(0,2),(2,0),(1,2),(2,1)
    CHECK(set.size() == 5);
    CHECK(set.count({0, 1}) == 0);
}

TEST_CASE("score_pair: single personas reduce to the plain dot product") {
    EmbeddingMatrix emb;
    emb.rows = 2;
    emb.dim = 2;
    emb.phi_in = {1.0, 2.0, 3.0, -1.0};
    emb.phi_out = {0, 0, 0, 0};
    std::vector<std::vector<PersonaId>> v2p{{0}, {1}};
    const double expected = 1.0 * 3.0 + 2.0 * -1.0;
    for (auto agg : {Aggregation::max, Aggregation::min, Aggregation::mean})
        CHECK(score_pair(emb, v2p, 0, 1, agg) == doctest::Approx(expected));
}

TEST_CASE("score_pair: aggregation over persona pairs") {
    // u has two personas scoring 0.2 and 0.9 against single-persona v.
    EmbeddingMatrix emb;
    emb.rows = 3;
    emb.dim = 1;
    emb.phi_in = {0.2, 0.9, 1.0};
    emb.phi_out = {0, 0, 0};
    std::vector<std::vector<PersonaId>> v2p{{0, 1}, {2}};
    CHECK(score_pair(emb, v2p, 0, 1, Aggregation::max) == doctest::Approx(0.9));
    CHECK(score_pair(emb, v2p, 0, 1, Aggregation::min) == doctest::Approx(0.2));
    CHECK(score_pair(emb, v2p, 0, 1, Aggregation::mean) == doctest::Approx(0.55));
}

TEST_CASE("score_pair: min <= mean <= max on random cases") {
    Rng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 1 + rng.next_below(4);
        const std::size_t pu = 1 + rng.next_below(4), pv = 1 + rng.next_below(4);
        EmbeddingMatrix emb;
        emb.rows = pu + pv;
        emb.dim = dim;
        emb.phi_in.resize(emb.rows * dim);
        emb.phi_out.resize(emb.rows * dim);
        for (double& x : emb.phi_in) x = rng.next_double() * 2 - 1;
        std::vector<std::vector<PersonaId>> v2p(2);
        for (std::size_t i = 0; i < pu; ++i) v2p[0].push_back(static_cast<PersonaId>(i));
        for (std::size_t i = 0; i < pv; ++i)
            v2p[1].push_back(static_cast<PersonaId>(pu + i));
        const double lo = score_pair(emb, v2p, 0, 1, Aggregation::min);
        const double mid = score_pair(emb, v2p, 0, 1, Aggregation::mean);
        const double hi = score_pair(emb, v2p, 0, 1, Aggregation::max);
        CHECK(lo <= mid + 1e-12);
        CHECK(mid <= hi + 1e-12);
    }
}

TEST_CASE("score_pair: unknown node rejected") {
    EmbeddingMatrix emb;
    emb.rows = 1;
    emb.dim = 1;
    emb.phi_in = {1.0};
    std::vector<std::vector<PersonaId>> v2p{{0}};
    CHECK_THROWS_AS(score_pair(emb, v2p, 0, 5, Aggregation::max), std::invalid_argument);
}

TEST_CASE("roc_auc: exact values") {
    CHECK(roc_auc(std::vector<double>{1.0}, std::vector<double>{0.0}) == 1.0);
    CHECK(roc_auc(std::vector<double>{0.0}, std::vector<double>{1.0}) == 0.0);
    CHECK(roc_auc(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5}) == 0.5);
    // 3 of 4 pairs concordant
    CHECK(roc_auc(std::vector<double>{0.9, 0.4}, std::vector<double>{0.6, 0.1}) == 0.75);
}

TEST_CASE("roc_auc: invariant under monotone transforms") {
    Rng rng(41);
    std::vector<double> pos(200), neg(180);
    for (double& x : pos) x = rng.next_double() + 0.1;
    for (double& x : neg) x = rng.next_double();
    const double base = roc_auc(pos, neg);

    auto transform = [](std::vector<double> xs, auto fn) {
        for (double& x : xs) x = fn(x);
        return xs;
    };
    auto expmap = [](double x) { return std::exp(3.0 * x); };
    CHECK(roc_auc(transform(pos, expmap), transform(neg, expmap)) ==
          doctest::Approx(base).epsilon(1e-12));
    auto affine = [](double x) { return 7.0 * x - 2.0; };
    CHECK(roc_auc(transform(pos, affine), transform(neg, affine)) ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("roc_auc: random scorer sits near 0.5") {
    Rng rng(53);
    std::vector<double> pos(5000), neg(5000);
    for (double& x : pos) x = rng.next_double();
    for (double& x : neg) x = rng.next_double();
    const double auc = roc_auc(pos, neg);
    CHECK(auc > 0.47);
    CHECK(auc < 0.53);
}

TEST_CASE("harness sanity: oracle and constant scorers") {
    Graph g = erdos_renyi(30, 90, 77);
    if (!is_connected(g)) g = largest_component(g);
    LinkPredSplit split = split_edges(g, 0.4, 5);
    split.negative_pairs = sample_negatives(g, split.test_edges.size(), 6);

    std::set<std::pair<NodeId, NodeId>> test_set;
    for (const Edge& e : split.test_edges) test_set.insert({e.src, e.dst});
    auto oracle = [&](NodeId u, NodeId v) {
        return test_set.count({u, v}) || test_set.count({v, u}) ? 1.0 : 0.0;
    };
    CHECK(evaluate_split(split, oracle) == 1.0);

    auto constant = [](NodeId, NodeId) { return 0.42; };
    CHECK(evaluate_split(split, constant) == 0.5);
}

TEST_CASE("run_experiment: directed graph") {
    Graph g = erdos_renyi(35, 180, 19, true);
    if (!is_connected(g)) g = largest_component(g);

    Persona2VecConfig cfg;
    cfg.dim = 8;
    cfg.base = {2, 8, 3, 1};
    cfg.persona = {2, 10, 2, 1};
    cfg.seed = 1;

    LinkPredConfig lp;
    lp.num_seeds = 1;
    lp.test_fraction = 0.3;

    EvalResult result = run_experiment(g, cfg, lp);
    REQUIRE(result.runs.size() == 1);
    CHECK(result.runs[0].auc >= 0.0);
    CHECK(result.runs[0].auc <= 1.0);
    CHECK(result.runs[0].n_test == result.runs[0].n_negative);
}

TEST_CASE("run_experiment: small end-to-end run") {
    Graph g = erdos_renyi(40, 160, 13);
    if (!is_connected(g)) g = largest_component(g);

    Persona2VecConfig cfg;
    cfg.dim = 16;
    cfg.base = {4, 10, 3, 1};
    cfg.persona = {2, 20, 2, 1};
    cfg.seed = 3;

    LinkPredConfig lp;
    lp.num_seeds = 2;
    lp.test_fraction = 0.3;

    EvalResult result = run_experiment(g, cfg, lp);
    REQUIRE(result.runs.size() == 2);
    for (const SeedRun& run : result.runs) {
        CHECK(run.auc >= 0.0);
        CHECK(run.auc <= 1.0);
        CHECK(run.n_test == run.n_negative);
        CHECK(run.n_train + run.n_test == g.num_edges());
        CHECK(run.n_personas >= g.num_nodes());
    }
    CHECK(result.mean_auc ==
          doctest::Approx((result.runs[0].auc + result.runs[1].auc) / 2));

    // determinism of the whole experiment
    EvalResult again = run_experiment(g, cfg, lp);
    CHECK(again.mean_auc == result.mean_auc);
}

TEST_SUITE_END();
