#include "persona2vec/walks.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace p2v {

namespace {
constexpr std::uint64_t kShuffleSalt = 0x77616c6b6f726465ULL;
}

TransitionTable::TransitionTable(const Graph& g) : g_(&g) {
    offsets_.resize(g.num_nodes() + 1, 0);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        offsets_[v + 1] = offsets_[v] + g.out_degree(v);
    cumulative_.resize(offsets_[g.num_nodes()]);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        double running = 0.0;
        std::size_t base = offsets_[v];
        auto nbrs = g.out_neighbors(v);
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            running += nbrs[i].weight;
            cumulative_[base + i] = running;
        }
    }
}

NodeId TransitionTable::step(NodeId v, Rng& rng) const {
    const std::size_t begin = offsets_[v];
    const std::size_t end = offsets_[v + 1];
    if (begin == end) return npos;
    const double total = cumulative_[end - 1];
    if (!(total > 0.0)) return npos;
    const double r = rng.next_double() * total;
    const auto it = std::upper_bound(cumulative_.begin() + begin,
                                     cumulative_.begin() + end, r);
    std::size_t idx = std::min<std::size_t>(it - (cumulative_.begin() + begin),
                                            end - begin - 1);
    return g_->out_neighbors(v)[idx].node;
}

std::vector<NodeId> weighted_random_walk(const Graph& g, const TransitionTable& table,
                                         NodeId start, int length, Rng& rng) {
    if (start >= g.num_nodes())
        throw std::invalid_argument("weighted_random_walk: start out of range");
    std::vector<NodeId> walk;
    walk.reserve(static_cast<std::size_t>(length) + 1);
    walk.push_back(start);
    NodeId current = start;
    for (int step = 0; step < length; ++step) {
        NodeId next = table.step(current, rng);
        if (next == TransitionTable::npos) break;
        walk.push_back(next);
        current = next;
    }
    return walk;
}

std::vector<NodeId> weighted_random_walk(const Graph& g, NodeId start, int length,
                                         Rng& rng) {
    TransitionTable table(g);
    return weighted_random_walk(g, table, start, length, rng);
}

WalkCorpus generate_corpus(const Graph& g, const WalkConfig& cfg, int threads) {
    if (g.num_nodes() == 0)
        throw std::invalid_argument("generate_corpus: empty graph");
    if (cfg.walks_per_node < 1 || cfg.walk_length < 1)
        throw std::invalid_argument("generate_corpus: walks_per_node and walk_length must be >= 1");

    const std::size_t n = g.num_nodes();
    TransitionTable table(g);

    WalkCorpus corpus;
    corpus.walks.resize(static_cast<std::size_t>(cfg.walks_per_node) * n);

    std::vector<NodeId> order(n);
    for (NodeId pass = 0; pass < static_cast<NodeId>(cfg.walks_per_node); ++pass) {
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
        Rng shuffle_rng = Rng::stream(cfg.seed, kShuffleSalt, pass);
        shuffle_rng.shuffle(order);

        auto run_range = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                NodeId start = order[i];
                Rng walk_rng = Rng::stream(cfg.seed, pass, start);
                corpus.walks[pass * n + i] =
                    weighted_random_walk(g, table, start, cfg.walk_length, walk_rng);
            }
        };

        if (threads <= 1) {
            run_range(0, n);
        } else {
            std::vector<std::thread> workers;
            const std::size_t chunk = (n + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                std::size_t begin = std::min(n, t * chunk);
                std::size_t end = std::min(n, begin + chunk);
                if (begin < end) workers.emplace_back(run_range, begin, end);
            }
            for (auto& w : workers) w.join();
        }
    }
    return corpus;
}

void save_corpus(const WalkCorpus& corpus, const std::string& path,
                 const std::function<std::string(NodeId)>& label) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& walk : corpus.walks) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) file << ' ';
            file << label(walk[i]);
        }
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace p2v
