#include "persona2vec/linkpred.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "persona2vec/rng.hpp"

namespace p2v {

namespace {

constexpr std::uint64_t kNegativeSalt = 0x6c706e6567ULL;

std::uint64_t pair_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

// Undirected adjacency view with lazy edge removal, for the repeated
// "does u still reach v without this edge" queries of split_edges.
// Visited stamps avoid clearing the seen array per query.
class RemovalOracle {
public:
    explicit RemovalOracle(const Graph& g)
        : n_(g.num_nodes()), stamp_(g.num_nodes(), 0) {
        adjacency_.resize(n_);
        edge_alive_.assign(g.num_edges(), 1);
        for (std::size_t idx = 0; idx < g.num_edges(); ++idx) {
            const Edge& e = g.edges()[idx];
            adjacency_[e.src].push_back({e.dst, idx});
            adjacency_[e.dst].push_back({e.src, idx});
        }
    }

    void remove(std::size_t edge_idx) { edge_alive_[edge_idx] = 0; }

    // True iff u reaches v with edge_idx ignored.
    bool connected_without(NodeId u, NodeId v, std::size_t edge_idx) {
        ++round_;
        stack_.clear();
        stack_.push_back(u);
        stamp_[u] = round_;
        while (!stack_.empty()) {
            NodeId w = stack_.back();
            stack_.pop_back();
            for (const auto& [next, idx] : adjacency_[w]) {
                if (idx == edge_idx || !edge_alive_[idx] || stamp_[next] == round_)
                    continue;
                if (next == v) return true;
                stamp_[next] = round_;
                stack_.push_back(next);
            }
        }
        return false;
    }

private:
    NodeId n_;
    std::vector<std::vector<std::pair<NodeId, std::size_t>>> adjacency_;
    std::vector<char> edge_alive_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t round_ = 0;
    std::vector<NodeId> stack_;
};

}  // namespace

Aggregation parse_aggregation(const std::string& name) {
    if (name == "max") return Aggregation::max;
    if (name == "min") return Aggregation::min;
    if (name == "mean") return Aggregation::mean;
    throw std::invalid_argument("unknown aggregation: " + name);
}

LinkPredSplit split_edges(const Graph& g, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split_edges: test_fraction must be in (0, 1)");
    if (!is_connected(g))
        throw std::invalid_argument("split_edges: input graph must be connected");

    const std::size_t m = g.num_edges();
    LinkPredSplit split;
    split.seed = seed;
    split.target_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(test_fraction * static_cast<double>(m) + 0.5));

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    RemovalOracle oracle(g);
    std::vector<char> in_test(m, 0);
    std::size_t accepted = 0;
    for (std::size_t idx : order) {
        if (accepted == split.target_test) break;
        const Edge& e = g.edges()[idx];
        if (oracle.connected_without(e.src, e.dst, idx)) {
            oracle.remove(idx);
            in_test[idx] = 1;
            ++accepted;
        }
    }

    if (accepted == 0)
        throw std::runtime_error("split_edges: no removable edges (every edge is a bridge)");
    split.reached_target = accepted == split.target_test;
    if (!split.reached_target) {
        std::cerr << "warning: split_edges kept " << accepted << " of "
                  << split.target_test << " targeted test edges (bridge-limited)\n";
    }

    split.test_edges.reserve(accepted);
    split.train_edges.reserve(m - accepted);
    for (std::size_t idx = 0; idx < m; ++idx) {
        (in_test[idx] ? split.test_edges : split.train_edges).push_back(g.edges()[idx]);
    }
    return split;
}

std::vector<std::pair<NodeId, NodeId>> sample_negatives(const Graph& g,
                                                        std::size_t count,
                                                        std::uint64_t seed) {
    const std::uint64_t n = g.num_nodes();
    const std::uint64_t all_pairs =
        g.directed() ? n * (n - 1) : n * (n - 1) / 2;
    if (all_pairs < g.num_edges())
        throw std::logic_error("sample_negatives: edge count exceeds pair count");
    const std::uint64_t available = all_pairs - g.num_edges();
    if (count > available)
        throw std::runtime_error("sample_negatives: no negative pairs available");
    if (count == 0) return {};

    Rng rng(seed);
    std::vector<std::pair<NodeId, NodeId>> result;
    result.reserve(count);

    // Dense or demanding cases: enumerate every non-edge and take a
    // partial Fisher-Yates prefix. Otherwise plain rejection sampling.
    if (all_pairs <= (1ULL << 22) || count * 2 > available) {
        std::vector<std::pair<NodeId, NodeId>> pool;
        pool.reserve(available);
        for (NodeId u = 0; u < n; ++u) {
            const NodeId v0 = g.directed() ? 0 : u + 1;
            for (NodeId v = v0; v < n; ++v) {
                if (u != v && !g.has_edge(u, v)) pool.push_back({u, v});
            }
        }
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool.size() - i));
            std::swap(pool[i], pool[j]);
            result.push_back(pool[i]);
        }
        return result;
    }

    std::unordered_set<std::uint64_t> taken;
    taken.reserve(count * 2);
    while (result.size() < count) {
        NodeId u = static_cast<NodeId>(rng.next_below(n));
        NodeId v = static_cast<NodeId>(rng.next_below(n));
        if (u == v) continue;
        if (!g.directed() && u > v) std::swap(u, v);
        if (g.has_edge(u, v)) continue;
        if (!taken.insert(pair_key(u, v)).second) continue;
        result.push_back({u, v});
    }
    return result;
}

double score_pair(const EmbeddingMatrix& emb,
                  const std::vector<std::vector<PersonaId>>& v2p, NodeId u, NodeId v,
                  Aggregation agg) {
    if (u >= v2p.size() || v >= v2p.size() || v2p[u].empty() || v2p[v].empty())
        throw std::invalid_argument("score_pair: node without personas");

    double best_max = -std::numeric_limits<double>::infinity();
    double best_min = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (PersonaId p : v2p[u]) {
        const auto pu = emb.in_row(p);
        for (PersonaId q : v2p[v]) {
            const auto qv = emb.in_row(q);
            double dot = 0.0;
            for (std::size_t c = 0; c < emb.dim; ++c) dot += pu[c] * qv[c];
            best_max = std::max(best_max, dot);
            best_min = std::min(best_min, dot);
            sum += dot;
            ++pairs;
        }
    }
    switch (agg) {
        case Aggregation::max: return best_max;
        case Aggregation::min: return best_min;
        case Aggregation::mean: return sum / static_cast<double>(pairs);
    }
    throw std::logic_error("unreachable aggregation");
}

double roc_auc(std::span<const double> pos_scores, std::span<const double> neg_scores) {
    if (pos_scores.empty() || neg_scores.empty())
        throw std::invalid_argument("roc_auc: need both positive and negative scores");

    std::vector<std::pair<double, char>> scored;
    scored.reserve(pos_scores.size() + neg_scores.size());
    for (double s : pos_scores) scored.push_back({s, 1});
    for (double s : neg_scores) scored.push_back({s, 0});
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Midrank sum over positives.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < scored.size()) {
        std::size_t j = i;
        while (j < scored.size() && scored[j].first == scored[i].first) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (scored[k].second) rank_sum_pos += midrank;
        i = j;
    }
    const double n_pos = static_cast<double>(pos_scores.size());
    const double n_neg = static_cast<double>(neg_scores.size());
    return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double evaluate_split(const LinkPredSplit& split, const PairScorer& scorer) {
    std::vector<double> pos, neg;
    pos.reserve(split.test_edges.size());
    neg.reserve(split.negative_pairs.size());
    for (const Edge& e : split.test_edges) pos.push_back(scorer(e.src, e.dst));
    for (const auto& [u, v] : split.negative_pairs) neg.push_back(scorer(u, v));
    return roc_auc(pos, neg);
}

EvalResult run_experiment(const Graph& g, const Persona2VecConfig& cfg,
                          const LinkPredConfig& lp) {
    if (lp.num_seeds == 0)
        throw std::invalid_argument("run_experiment: need at least one seed");

    EvalResult result;
    for (std::size_t run_idx = 0; run_idx < lp.num_seeds; ++run_idx) {
        SeedRun run;
        run.seed = cfg.seed + run_idx;

        auto tic = std::chrono::steady_clock::now();
        LinkPredSplit split = split_edges(g, lp.test_fraction, run.seed);
        split.negative_pairs = sample_negatives(g, split.test_edges.size(),
                                                run.seed ^ kNegativeSalt);
        run.split_edges_s = seconds_since(tic);

        Graph train_graph(g.num_nodes(), g.directed(), split.train_edges, g.labels());
        run.n_train = train_graph.num_edges();
        run.n_test = split.test_edges.size();
        run.n_negative = split.negative_pairs.size();

        Persona2VecConfig run_cfg = cfg;
        run_cfg.seed = run.seed;

        EmbeddingMatrix emb;
        std::vector<std::vector<PersonaId>> v2p;
        if (lp.no_split) {
            emb = embed_baseline(train_graph, run_cfg);
            v2p.resize(g.num_nodes());
            for (NodeId v = 0; v < g.num_nodes(); ++v) v2p[v] = {v};
            run.n_personas = g.num_nodes();
        } else {
            Persona2VecResult pipeline = persona2vec(train_graph, run_cfg);
            run.timings = pipeline.timings;
            run.n_personas = pipeline.personas.num_personas();
            emb = std::move(pipeline.embedding);
            v2p = std::move(pipeline.personas.v2p);
        }

        tic = std::chrono::steady_clock::now();
        run.auc = evaluate_split(split, [&](NodeId u, NodeId v) {
            return score_pair(emb, v2p, u, v, lp.agg);
        });
        run.score_s = seconds_since(tic);
        result.runs.push_back(run);
    }

    double sum = 0.0;
    for (const SeedRun& run : result.runs) sum += run.auc;
    result.mean_auc = sum / static_cast<double>(result.runs.size());
    if (result.runs.size() > 1) {
        double ss = 0.0;
        for (const SeedRun& run : result.runs) {
            const double d = run.auc - result.mean_auc;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(result.runs.size() - 1));
        result.stderr_auc = sd / std::sqrt(static_cast<double>(result.runs.size()));
    }
    return result;
}

}  // namespace p2v
