#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "persona2vec/graph.hpp"
#include "persona2vec/pipeline.hpp"
#include "persona2vec/skipgram.hpp"

namespace p2v {

enum class Aggregation { max, min, mean };

Aggregation parse_aggregation(const std::string& name);

struct LinkPredSplit {
    std::vector<Edge> train_edges;
    std::vector<Edge> test_edges;
    std::vector<std::pair<NodeId, NodeId>> negative_pairs;
    std::uint64_t seed = 0;
    std::size_t target_test = 0;
    bool reached_target = true;
};

// Moves edges into the test set in seeded random order, keeping only
// candidates whose removal leaves the remaining train graph (weakly)
// connected, until `test_fraction` of the edges moved or no candidate is
// left. Throws if no edge at all can be removed (spanning tree input).
// negative_pairs is left empty here; see sample_negatives.
LinkPredSplit split_edges(const Graph& g, double test_fraction, std::uint64_t seed);

// Uniform non-edges of g (ordered pairs for directed graphs, unordered
// otherwise), no self-loops, sampled without replacement. Throws when
// fewer than `count` non-edges exist.
std::vector<std::pair<NodeId, NodeId>> sample_negatives(const Graph& g,
                                                        std::size_t count,
                                                        std::uint64_t seed);

// Aggregated dot product over all persona pairs of u and v.
double score_pair(const EmbeddingMatrix& emb,
                  const std::vector<std::vector<PersonaId>>& v2p, NodeId u, NodeId v,
                  Aggregation agg);

// Mann-Whitney rank statistic with midranks for ties:
// (#concordant + 0.5 #ties) / (|pos| * |neg|).
double roc_auc(std::span<const double> pos_scores, std::span<const double> neg_scores);

// Scores a split with an arbitrary pair scorer and returns the AUC.
// Used by the experiment driver and for harness sanity checks.
using PairScorer = std::function<double(NodeId, NodeId)>;
double evaluate_split(const LinkPredSplit& split, const PairScorer& scorer);

struct LinkPredConfig {
    double test_fraction = 0.5;
    std::size_t num_seeds = 5;
    Aggregation agg = Aggregation::max;
    bool no_split = false;  // evaluate the plain single-vector baseline
};

struct SeedRun {
    std::uint64_t seed = 0;
    double auc = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t n_negative = 0;
    std::size_t n_personas = 0;
    StageTimings timings;
    double split_edges_s = 0.0;
    double score_s = 0.0;
};

struct EvalResult {
    std::vector<SeedRun> runs;
    double mean_auc = 0.0;
    double stderr_auc = 0.0;
};

// Per seed: connectivity-preserving split, negatives matching the test
// size, pipeline trained on the train edges only, test and negative pairs
// scored, ROC-AUC. Seeds are cfg.seed, cfg.seed+1, ...
EvalResult run_experiment(const Graph& g, const Persona2VecConfig& cfg,
                          const LinkPredConfig& lp);

}  // namespace p2v
