#include "persona2vec/skipgram.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <thread>

namespace p2v {

namespace {
constexpr std::uint64_t kInitSalt = 0x696e697470686920ULL;
constexpr std::uint64_t kNegativeSalt = 0x6e656773616d70ULL;
constexpr double kAlphaFloorFactor = 1e-4;
}  // namespace

EmbeddingMatrix init_random(std::size_t n, const TrainConfig& cfg) {
    if (n < 1) throw std::invalid_argument("init_random: need at least one row");
    if (cfg.dim < 1) throw std::invalid_argument("init_random: dim must be >= 1");
    EmbeddingMatrix emb;
    emb.rows = n;
    emb.dim = static_cast<std::size_t>(cfg.dim);
    emb.phi_in.resize(n * emb.dim);
    emb.phi_out.assign(n * emb.dim, 0.0);
    Rng rng = Rng::stream(cfg.seed, kInitSalt, n);
    const double scale = 1.0 / static_cast<double>(cfg.dim);
    for (double& value : emb.phi_in) value = (rng.next_double() - 0.5) * scale;
    return emb;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void sgns_pair_update(EmbeddingMatrix& emb, NodeId center, NodeId context,
                      std::span<const NodeId> negatives, double alpha,
                      std::span<double> scratch) {
    const std::size_t d = emb.dim;
    double* center_row = emb.phi_in.data() + center * d;
    std::fill(scratch.begin(), scratch.begin() + d, 0.0);

    auto apply = [&](NodeId other, double label) {
        double* out_row = emb.phi_out.data() + other * d;
        double x = 0.0;
        for (std::size_t c = 0; c < d; ++c) x += center_row[c] * out_row[c];
        const double g = (label - sigmoid(x)) * alpha;
        for (std::size_t c = 0; c < d; ++c) {
            scratch[c] += g * out_row[c];
            out_row[c] += g * center_row[c];
        }
    };

    apply(context, 1.0);
    for (NodeId negative : negatives) apply(negative, 0.0);
    for (std::size_t c = 0; c < d; ++c) center_row[c] += scratch[c];
}

void sgns_pair_update(EmbeddingMatrix& emb, NodeId center, NodeId context,
                      std::span<const NodeId> negatives, double alpha) {
    std::vector<double> scratch(emb.dim);
    sgns_pair_update(emb, center, context, negatives, alpha, scratch);
}

std::size_t count_skipgram_pairs(const WalkCorpus& corpus, int window) {
    std::size_t total = 0;
    for (const auto& walk : corpus.walks) {
        const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
        for (std::ptrdiff_t i = 0; i < len; ++i) {
            const std::ptrdiff_t lo = i > window ? i - window : 0;
            const std::ptrdiff_t hi = std::min(i + window, len - 1);
            total += static_cast<std::size_t>(hi - lo);
        }
    }
    return total;
}

NoiseTable::NoiseTable(const Graph& g, double power) {
    std::vector<double> weights(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        weights[v] = std::pow(static_cast<double>(g.degree(v)), power);
    build(std::move(weights));
}

NoiseTable::NoiseTable(std::vector<double> weights) { build(std::move(weights)); }

void NoiseTable::build(std::vector<double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("noise table: no nodes");
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) {
        // Edgeless graph: fall back to uniform.
        std::fill(weights.begin(), weights.end(), 1.0);
        total = static_cast<double>(n);
    }

    probability_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<NodeId> small, large;
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<NodeId>(i));
    }
    while (!small.empty() && !large.empty()) {
        NodeId s = small.back();
        small.pop_back();
        NodeId l = large.back();
        probability_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (NodeId v : large) probability_[v] = 1.0;
    for (NodeId v : small) probability_[v] = 1.0;
}

NodeId NoiseTable::sample(Rng& rng) const {
    const std::size_t slot = rng.next_below(probability_.size());
    return rng.next_double() < probability_[slot] ? static_cast<NodeId>(slot)
                                                  : alias_[slot];
}

namespace {

// Trains walks [begin, end) of one epoch; pair_counter carries the global
// pair position driving the learning-rate schedule.
void train_walk_range(EmbeddingMatrix& emb, const WalkCorpus& corpus,
                      const NoiseTable& noise, const TrainConfig& cfg, int epoch,
                      std::size_t begin, std::size_t end, std::size_t pair_total,
                      std::atomic<std::size_t>& pair_counter) {
    std::vector<double> scratch(emb.dim);
    std::vector<NodeId> negatives(static_cast<std::size_t>(cfg.negatives));
    const bool can_sample = emb.rows >= 2 && cfg.negatives > 0;
    const double floor = cfg.alpha * kAlphaFloorFactor;

    for (std::size_t w = begin; w < end; ++w) {
        const auto& walk = corpus.walks[w];
        if (walk.size() < 2) continue;
        Rng rng = Rng::stream(cfg.seed ^ kNegativeSalt, static_cast<std::uint64_t>(epoch), w);

        // Claim this walk's pairs up front; within the walk the rate decays
        // per pair from the claimed position.
        std::size_t walk_pairs = 0;
        {
            const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(walk.size());
            for (std::ptrdiff_t i = 0; i < len; ++i) {
                const std::ptrdiff_t lo = i > cfg.window ? i - cfg.window : 0;
                const std::ptrdiff_t hi = std::min(i + cfg.window, len - 1);
                walk_pairs += static_cast<std::size_t>(hi - lo);
            }
        }
        std::size_t position = pair_counter.fetch_add(walk_pairs, std::memory_order_relaxed);

        for_each_skipgram_pair(walk, cfg.window, [&](NodeId center, NodeId context) {
            const double progress =
                static_cast<double>(position++) / static_cast<double>(pair_total);
            const double alpha = std::max(cfg.alpha * (1.0 - progress), floor);
            std::size_t n_negatives = 0;
            if (can_sample) {
                for (int k = 0; k < cfg.negatives; ++k) {
                    NodeId neg = noise.sample(rng);
                    while (neg == context) neg = noise.sample(rng);
                    negatives[n_negatives++] = neg;
                }
            }
            sgns_pair_update(emb, center, context,
                             {negatives.data(), n_negatives}, alpha, scratch);
        });
    }
}

}  // namespace

EmbeddingMatrix train(const WalkCorpus& corpus, const Graph& g, const TrainConfig& cfg,
                      const EmbeddingMatrix* warm_start) {
    if (corpus.walks.empty()) throw std::invalid_argument("train: empty corpus");
    if (cfg.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
    if (cfg.window < 1) throw std::invalid_argument("train: window must be >= 1");

    EmbeddingMatrix emb;
    if (warm_start != nullptr) {
        if (warm_start->rows != g.num_nodes() ||
            warm_start->dim != static_cast<std::size_t>(cfg.dim))
            throw std::invalid_argument("train: warm start shape mismatch");
        emb = *warm_start;
    } else {
        emb = init_random(g.num_nodes(), cfg);
    }
    if (cfg.epochs == 0) return emb;

    for (const auto& walk : corpus.walks)
        for (NodeId v : walk)
            if (v >= emb.rows)
                throw std::invalid_argument("train: corpus node id exceeds row count");

    const std::size_t per_epoch = count_skipgram_pairs(corpus, cfg.window);
    if (per_epoch == 0) return emb;
    const std::size_t pair_total = per_epoch * static_cast<std::size_t>(cfg.epochs);

    NoiseTable noise(g);
    std::atomic<std::size_t> pair_counter{0};
    const std::size_t n_walks = corpus.walks.size();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.threads <= 1) {
            train_walk_range(emb, corpus, noise, cfg, epoch, 0, n_walks, pair_total,
                             pair_counter);
        } else {
            std::vector<std::thread> workers;
            const std::size_t chunk = (n_walks + cfg.threads - 1) / cfg.threads;
            for (int t = 0; t < cfg.threads; ++t) {
                const std::size_t begin = std::min(n_walks, t * chunk);
                const std::size_t end = std::min(n_walks, begin + chunk);
                if (begin < end)
                    workers.emplace_back([&, begin, end] {
                        train_walk_range(emb, corpus, noise, cfg, epoch, begin, end,
                                         pair_total, pair_counter);
                    });
            }
            for (auto& w : workers) w.join();
        }
    }
    return emb;
}

void save_embedding(const EmbeddingMatrix& emb, const std::vector<std::string>& labels,
                    const std::string& path) {
    if (labels.size() != emb.rows)
        throw std::invalid_argument("save_embedding: label count mismatch");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << emb.rows << ' ' << emb.dim << '\n';
    file << std::setprecision(17);
    for (std::size_t r = 0; r < emb.rows; ++r) {
        file << labels[r];
        for (double value : emb.in_row(r)) file << ' ' << value;
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace p2v
