#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "persona2vec/graph.hpp"
#include "persona2vec/rng.hpp"

namespace p2v {

struct WalkConfig {
    int walks_per_node = 10;  // gamma
    int walk_length = 40;     // t, steps per walk (walks hold <= t+1 nodes)
    std::uint64_t seed = 0;
};

struct WalkCorpus {
    std::vector<std::vector<NodeId>> walks;
};

// Per-node cumulative out-weights for O(log deg) weighted steps.
// Zero-weight arcs get zero probability; a node whose out-weights sum to
// zero is a dead end.
class TransitionTable {
public:
    static constexpr NodeId npos = ~NodeId{0};

    explicit TransitionTable(const Graph& g);

    NodeId step(NodeId v, Rng& rng) const;

private:
    const Graph* g_;
    std::vector<std::size_t> offsets_;
    std::vector<double> cumulative_;
};

// Weighted random walk of at most `length` steps from `start`; terminates
// early at dead ends. The returned sequence includes the start node.
std::vector<NodeId> weighted_random_walk(const Graph& g, const TransitionTable& table,
                                         NodeId start, int length, Rng& rng);
std::vector<NodeId> weighted_random_walk(const Graph& g, NodeId start, int length,
                                         Rng& rng);

// gamma passes over the nodes; each pass shuffles the start order with a
// pass-specific stream and starts one walk per node, so the corpus holds
// gamma * |V| walks. Every walk draws from its own rng stream derived
// from (seed, pass, start), which makes the corpus independent of
// `threads` (0 = sequential).
WalkCorpus generate_corpus(const Graph& g, const WalkConfig& cfg, int threads = 0);

// One walk per line, nodes rendered by `label` and separated by spaces.
void save_corpus(const WalkCorpus& corpus, const std::string& path,
                 const std::function<std::string(NodeId)>& label);

}  // namespace p2v
