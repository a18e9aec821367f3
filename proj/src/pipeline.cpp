#include "persona2vec/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace p2v {

namespace {

constexpr std::uint64_t kSplitSalt = 0x73706c6974ULL;
constexpr std::uint64_t kBaseWalkSalt = 0x6261736577ULL;
constexpr std::uint64_t kBaseTrainSalt = 0x6261736574ULL;
constexpr std::uint64_t kPersonaWalkSalt = 0x7065727377ULL;
constexpr std::uint64_t kPersonaTrainSalt = 0x7065727374ULL;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ salt;
    return Rng::splitmix64(x);
}

}  // namespace

EmbeddingMatrix warm_start_personas(const PersonaGraph& pg, const EmbeddingMatrix& base) {
    if (base.rows != pg.v2p.size())
        throw std::invalid_argument("warm_start_personas: base rows != node count");
    EmbeddingMatrix emb;
    emb.rows = pg.num_personas();
    emb.dim = base.dim;
    emb.phi_in.resize(emb.rows * emb.dim);
    emb.phi_out.resize(emb.rows * emb.dim);
    for (PersonaId p = 0; p < pg.num_personas(); ++p) {
        const NodeId v = pg.owner[p];
        std::copy_n(base.phi_in.data() + v * base.dim, base.dim,
                    emb.phi_in.data() + p * emb.dim);
        std::copy_n(base.phi_out.data() + v * base.dim, base.dim,
                    emb.phi_out.data() + p * emb.dim);
    }
    return emb;
}

Persona2VecResult persona2vec(const Graph& g, const Persona2VecConfig& cfg) {
    Persona2VecResult result;
    auto tic = std::chrono::steady_clock::now();

    result.personas =
        build_persona_graph(g, cfg.clustering, cfg.lambda, derive(cfg.seed, kSplitSalt));
    result.timings.split_s = seconds_since(tic);

    tic = std::chrono::steady_clock::now();
    WalkCorpus base_corpus = generate_corpus(
        g, {cfg.base.walks_per_node, cfg.base.walk_length, derive(cfg.seed, kBaseWalkSalt)},
        cfg.threads);
    result.timings.base_walk_s = seconds_since(tic);

    tic = std::chrono::steady_clock::now();
    TrainConfig base_train{cfg.dim,       cfg.base.window,
                           cfg.alpha,     cfg.base.epochs,
                           cfg.negatives, derive(cfg.seed, kBaseTrainSalt),
                           cfg.threads};
    EmbeddingMatrix base = train(base_corpus, g, base_train);
    result.timings.base_train_s = seconds_since(tic);

    EmbeddingMatrix warm = warm_start_personas(result.personas, base);

    tic = std::chrono::steady_clock::now();
    WalkCorpus persona_corpus =
        generate_corpus(result.personas.graph,
                        {cfg.persona.walks_per_node, cfg.persona.walk_length,
                         derive(cfg.seed, kPersonaWalkSalt)},
                        cfg.threads);
    result.timings.persona_walk_s = seconds_since(tic);

    tic = std::chrono::steady_clock::now();
    TrainConfig persona_train{cfg.dim,       cfg.persona.window,
                              cfg.alpha,     cfg.persona.epochs,
                              cfg.negatives, derive(cfg.seed, kPersonaTrainSalt),
                              cfg.threads};
    result.embedding = train(persona_corpus, result.personas.graph, persona_train, &warm);
    result.timings.persona_train_s = seconds_since(tic);

    return result;
}

EmbeddingMatrix embed_baseline(const Graph& g, const Persona2VecConfig& cfg) {
    WalkCorpus corpus = generate_corpus(
        g, {cfg.base.walks_per_node, cfg.base.walk_length, derive(cfg.seed, kBaseWalkSalt)},
        cfg.threads);
    TrainConfig train_cfg{cfg.dim,       cfg.base.window,
                          cfg.alpha,     cfg.base.epochs,
                          cfg.negatives, derive(cfg.seed, kBaseTrainSalt),
                          cfg.threads};
    return train(corpus, g, train_cfg);
}

}  // namespace p2v
