#pragma once

#include <cstdint>

#include "persona2vec/ego_split.hpp"
#include "persona2vec/graph.hpp"
#include "persona2vec/skipgram.hpp"
#include "persona2vec/walks.hpp"

namespace p2v {

struct StageParams {
    int walks_per_node;
    int walk_length;
    int window;
    int epochs;
};

// Defaults: base stage t=40 / gamma=10 / w=5, persona stage t=80 /
// gamma=5 / w=2 (the t*gamma budget stays at 400), alpha 0.025, d=128,
// lambda 0.5.
struct Persona2VecConfig {
    double lambda = 0.5;
    int dim = 128;
    StageParams base{10, 40, 5, 1};
    StageParams persona{5, 80, 2, 1};
    double alpha = 0.025;
    int negatives = 5;
    LocalClustering clustering = LocalClustering::connected_components;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct StageTimings {
    double split_s = 0.0;
    double base_walk_s = 0.0;
    double base_train_s = 0.0;
    double persona_walk_s = 0.0;
    double persona_train_s = 0.0;
};

struct Persona2VecResult {
    PersonaGraph personas;
    EmbeddingMatrix embedding;  // one row per persona
    StageTimings timings;
};

// Copies each persona's row (input and output vectors) from its owner in
// the base embedding, so all personas of a node start identical.
EmbeddingMatrix warm_start_personas(const PersonaGraph& pg, const EmbeddingMatrix& base);

// Full two-stage pipeline: split into the persona graph, embed the
// original graph, transfer rows to personas, fine-tune on the persona
// graph. Expects a (weakly) connected input.
Persona2VecResult persona2vec(const Graph& g, const Persona2VecConfig& cfg);

// No-split control: plain skip-gram embedding of the original graph with
// the base-stage parameters.
EmbeddingMatrix embed_baseline(const Graph& g, const Persona2VecConfig& cfg);

}  // namespace p2v
