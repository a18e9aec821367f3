#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "persona2vec/graph.hpp"
#include "persona2vec/rng.hpp"

namespace testutil {

inline std::filesystem::path temp_dir() {
    static const std::filesystem::path dir = [] {
        auto base = std::filesystem::temp_directory_path() / "persona2vec_tests";
        std::filesystem::create_directories(base);
        return base;
    }();
    return dir;
}

inline std::string write_file(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream file(path);
    file << content;
    return path.string();
}

inline p2v::Graph triangle() {
    return p2v::Graph(3, false, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

inline p2v::Graph path_graph(p2v::NodeId n) {
    std::vector<p2v::Edge> edges;
    for (p2v::NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
    return p2v::Graph(n, false, std::move(edges));
}

inline p2v::Graph star_graph(p2v::NodeId leaves) {
    std::vector<p2v::Edge> edges;
    for (p2v::NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v, 1.0});
    return p2v::Graph(leaves + 1, false, std::move(edges));
}

// Erdos-Renyi G(n, m): m distinct non-loop pairs.
inline p2v::Graph erdos_renyi(p2v::NodeId n, std::size_t m, std::uint64_t seed,
                              bool directed = false) {
    p2v::Rng rng(seed);
    std::set<std::pair<p2v::NodeId, p2v::NodeId>> pairs;
    while (pairs.size() < m) {
        auto u = static_cast<p2v::NodeId>(rng.next_below(n));
        auto v = static_cast<p2v::NodeId>(rng.next_below(n));
        if (u == v) continue;
        if (!directed && u > v) std::swap(u, v);
        pairs.insert({u, v});
    }
    std::vector<p2v::Edge> edges;
    for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
    return p2v::Graph(n, directed, std::move(edges));
}

// Barabasi-Albert style preferential attachment, `attach` edges per new node.
inline p2v::Graph barabasi_albert(p2v::NodeId n, int attach, std::uint64_t seed) {
    p2v::Rng rng(seed);
    std::vector<p2v::NodeId> endpoint_pool;
    std::set<std::pair<p2v::NodeId, p2v::NodeId>> pairs;
    for (p2v::NodeId v = 1; v < n; ++v) {
        const int links = std::min<int>(attach, static_cast<int>(v));
        std::set<p2v::NodeId> chosen;
        while (static_cast<int>(chosen.size()) < links) {
            p2v::NodeId target;
            if (endpoint_pool.empty() || rng.next_double() < 0.2) {
                target = static_cast<p2v::NodeId>(rng.next_below(v));
            } else {
                target = endpoint_pool[rng.next_below(endpoint_pool.size())];
            }
            if (target != v) chosen.insert(target);
        }
        for (p2v::NodeId u : chosen) {
            pairs.insert({std::min(u, v), std::max(u, v)});
            endpoint_pool.push_back(u);
            endpoint_pool.push_back(v);
        }
    }
    std::vector<p2v::Edge> edges;
    for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
    return p2v::Graph(n, false, std::move(edges));
}

// Flood fill over an explicit adjacency copy; deliberately independent of
// the library's traversal code.
inline std::vector<std::vector<p2v::NodeId>> brute_force_components(const p2v::Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<p2v::NodeId>> adj(n);
    for (const p2v::Edge& e : g.edges()) {
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    std::vector<int> comp(n, -1);
    std::vector<std::vector<p2v::NodeId>> result;
    for (p2v::NodeId start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        std::vector<p2v::NodeId> queue{start}, members;
        comp[start] = static_cast<int>(result.size());
        while (!queue.empty()) {
            p2v::NodeId v = queue.back();
            queue.pop_back();
            members.push_back(v);
            for (p2v::NodeId u : adj[v]) {
                if (comp[u] < 0) {
                    comp[u] = comp[start];
                    queue.push_back(u);
                }
            }
        }
        std::sort(members.begin(), members.end());
        result.push_back(std::move(members));
    }
    return result;
}

inline bool brute_force_connected(const p2v::Graph& g) {
    if (g.num_nodes() == 0) return true;
    return brute_force_components(g).size() == 1;
}

// Upper-tail chi-square critical value via the Wilson-Hilferty cube
// approximation; good to a few percent for df >= 1, plenty for p = 0.01
// gates.
inline double chi2_critical_p01(double df) {
    const double z = 2.3263478740408408;  // Phi^-1(0.99)
    const double a = 2.0 / (9.0 * df);
    const double c = 1.0 - a + z * std::sqrt(a);
    return df * c * c * c;
}

}  // namespace testutil
