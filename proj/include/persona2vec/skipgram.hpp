#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "persona2vec/graph.hpp"
#include "persona2vec/rng.hpp"
#include "persona2vec/walks.hpp"

namespace p2v {

struct TrainConfig {
    int dim = 128;
    int window = 5;        // fixed (non-shrinking) context window
    double alpha = 0.025;  // initial learning rate, decays linearly per pair
    int epochs = 1;
    int negatives = 5;     // noise samples per positive pair
    std::uint64_t seed = 0;
    int threads = 0;       // 0 = deterministic single writer; >0 = hogwild
};

// Dense input/output vectors. phi_in is the representation handed to
// callers; phi_out exists only for training.
struct EmbeddingMatrix {
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::vector<double> phi_in;
    std::vector<double> phi_out;

    std::span<double> in_row(std::size_t r) { return {phi_in.data() + r * dim, dim}; }
    std::span<const double> in_row(std::size_t r) const {
        return {phi_in.data() + r * dim, dim};
    }
    std::span<double> out_row(std::size_t r) { return {phi_out.data() + r * dim, dim}; }
    std::span<const double> out_row(std::size_t r) const {
        return {phi_out.data() + r * dim, dim};
    }
};

// phi_in ~ uniform(-0.5/dim, 0.5/dim), phi_out all zeros.
EmbeddingMatrix init_random(std::size_t n, const TrainConfig& cfg);

double sigmoid(double x);

// One SGNS gradient step for (center, context) plus negatives: with label
// l per sample, g = l - sigmoid(phi_in[center] . phi_out[other]);
// phi_out[other] += alpha * g * phi_in[center], and the accumulated
// alpha * g * phi_out contributions land on phi_in[center] at the end.
// `scratch` must hold emb.dim values.
void sgns_pair_update(EmbeddingMatrix& emb, NodeId center, NodeId context,
                      std::span<const NodeId> negatives, double alpha,
                      std::span<double> scratch);
void sgns_pair_update(EmbeddingMatrix& emb, NodeId center, NodeId context,
                      std::span<const NodeId> negatives, double alpha);

// Enumerates (center, context) pairs with a fixed window: positions j in
// [i-w, i+w], j != i, clipped to the walk.
template <typename Fn>
void for_each_skipgram_pair(std::span<const NodeId> walk, int window, Fn&& fn) {
    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
    for (std::ptrdiff_t i = 0; i < len; ++i) {
        const std::ptrdiff_t lo = i > window ? i - window : 0;
        const std::ptrdiff_t hi = std::min(i + window, len - 1);
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
            if (j != i) fn(walk[i], walk[j]);
        }
    }
}

std::size_t count_skipgram_pairs(const WalkCorpus& corpus, int window);

// Unigram noise distribution proportional to degree^power over the
// trained graph, drawn in O(1) via an alias table.
class NoiseTable {
public:
    explicit NoiseTable(const Graph& g, double power = 0.75);
    explicit NoiseTable(std::vector<double> weights);

    NodeId sample(Rng& rng) const;
    std::size_t size() const { return probability_.size(); }

private:
    void build(std::vector<double> weights);
    std::vector<double> probability_;
    std::vector<NodeId> alias_;
};

// SGNS over all corpus pairs for cfg.epochs passes, negatives drawn from
// degree^0.75 noise on g. Starts from `warm_start` when given (row count
// must equal g.num_nodes()), otherwise from init_random. The learning
// rate decays linearly over all scheduled pairs to a 1e-4 * alpha floor.
// cfg.threads = 0 trains single-threaded and bit-reproducibly; > 0 uses
// unsynchronized row updates (lost updates tolerated).
EmbeddingMatrix train(const WalkCorpus& corpus, const Graph& g, const TrainConfig& cfg,
                      const EmbeddingMatrix* warm_start = nullptr);

// Text export: "N d" header, then one line per row: label then d values.
void save_embedding(const EmbeddingMatrix& emb, const std::vector<std::string>& labels,
                    const std::string& path);

}  // namespace p2v
