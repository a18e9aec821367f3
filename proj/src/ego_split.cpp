#include "persona2vec/ego_split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "persona2vec/rng.hpp"

namespace p2v {

LocalClustering parse_clustering(const std::string& name) {
    if (name == "cc" || name == "connected-components")
        return LocalClustering::connected_components;
    if (name == "lp" || name == "label-propagation")
        return LocalClustering::label_propagation;
    throw std::invalid_argument("unknown clustering method: " + name +
                                " (expected cc or lp)");
}

EgoNetwork ego_network(const Graph& g, NodeId ego) {
    if (ego >= g.num_nodes())
        throw std::invalid_argument("ego_network: node out of range");

    std::vector<NodeId> members;
    if (!g.directed()) {
        auto nbrs = g.out_neighbors(ego);
        members.reserve(nbrs.size());
        for (const Neighbor& nb : nbrs) members.push_back(nb.node);
    } else {
        auto outs = g.out_neighbors(ego);
        auto ins = g.in_neighbors(ego);
        members.reserve(outs.size() + ins.size());
        std::size_t i = 0, j = 0;
        while (i < outs.size() || j < ins.size()) {
            if (j == ins.size() || (i < outs.size() && outs[i].node < ins[j].node)) {
                members.push_back(outs[i++].node);
            } else if (i == outs.size() || ins[j].node < outs[i].node) {
                members.push_back(ins[j++].node);
            } else {
                members.push_back(outs[i].node);
                ++i;
                ++j;
            }
        }
    }
    // Induce via member adjacency rather than a full edge-list scan; the
    // total cost over all egos stays proportional to sum(deg^2).
    auto local_of = [&](NodeId u) -> std::ptrdiff_t {
        const auto it = std::lower_bound(members.begin(), members.end(), u);
        if (it == members.end() || *it != u) return -1;
        return it - members.begin();
    };
    std::vector<Edge> edges;
    std::vector<Label> labels(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
        const NodeId u = members[a];
        labels[a] = g.label(u);
        for (const Neighbor& nb : g.out_neighbors(u)) {
            if (nb.node == ego) continue;
            const std::ptrdiff_t b = local_of(nb.node);
            if (b < 0) continue;
            // undirected adjacency is symmetric; keep one copy per edge
            if (!g.directed() && static_cast<std::size_t>(b) <= a) continue;
            edges.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b), nb.weight});
        }
    }
    Graph sub(static_cast<NodeId>(members.size()), g.directed(), std::move(edges),
              std::move(labels));
    return {std::move(sub), std::move(members)};
}

namespace {

std::vector<std::vector<NodeId>> components_of(const Graph& g) {
    std::vector<std::vector<NodeId>> clusters;
    std::vector<char> seen(g.num_nodes(), 0);
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < g.num_nodes(); ++start) {
        if (seen[start]) continue;
        std::vector<NodeId> comp;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            auto visit = [&](NodeId u) {
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            };
            for (const Neighbor& nb : g.out_neighbors(v)) visit(nb.node);
            if (g.directed())
                for (const Neighbor& nb : g.in_neighbors(v)) visit(nb.node);
        }
        std::sort(comp.begin(), comp.end());
        clusters.push_back(std::move(comp));
    }
    return clusters;
}

std::vector<std::vector<NodeId>> label_propagation(const Graph& g,
                                                   std::uint64_t seed) {
    const NodeId n = g.num_nodes();
    std::vector<NodeId> labels(n);
    for (NodeId v = 0; v < n; ++v) labels[v] = v;

    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    Rng rng(seed);

    std::vector<double> weight_of_label(n, 0.0);
    std::vector<NodeId> touched;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        rng.shuffle(order);
        bool changed = false;
        for (NodeId v : order) {
            touched.clear();
            auto tally = [&](NodeId u, double w) {
                NodeId lbl = labels[u];
                if (weight_of_label[lbl] == 0.0) touched.push_back(lbl);
                weight_of_label[lbl] += w;
            };
            for (const Neighbor& nb : g.out_neighbors(v)) tally(nb.node, nb.weight);
            if (g.directed())
                for (const Neighbor& nb : g.in_neighbors(v)) tally(nb.node, nb.weight);
            if (touched.empty()) continue;

            NodeId best = labels[v];
            double best_weight = 0.0;
            for (NodeId lbl : touched) {
                double w = weight_of_label[lbl];
                if (w > best_weight || (w == best_weight && lbl < best)) {
                    best = lbl;
                    best_weight = w;
                }
                weight_of_label[lbl] = 0.0;
            }
            if (best != labels[v]) {
                labels[v] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    std::unordered_map<NodeId, std::size_t> cluster_of_label;
    std::vector<std::vector<NodeId>> clusters;
    for (NodeId v = 0; v < n; ++v) {
        auto [it, inserted] = cluster_of_label.try_emplace(labels[v], clusters.size());
        if (inserted) clusters.emplace_back();
        clusters[it->second].push_back(v);
    }
    // Group by final label; nodes were scanned in id order, so members are
    // ascending and clusters are ordered by smallest member already.
    return clusters;
}

}  // namespace

std::vector<std::vector<NodeId>> cluster_ego(const Graph& ego,
                                             LocalClustering method,
                                             std::uint64_t seed) {
    if (ego.num_nodes() == 0) return {};
    switch (method) {
        case LocalClustering::connected_components:
            return components_of(ego);
        case LocalClustering::label_propagation:
            return label_propagation(ego, seed);
    }
    throw std::logic_error("unreachable clustering method");
}

PersonaGraph build_persona_graph(const Graph& g, LocalClustering method,
                                 double lambda, std::uint64_t seed) {
    if (lambda < 0)
        throw std::invalid_argument("build_persona_graph: lambda must be >= 0");

    constexpr std::uint64_t kEgoSalt = 0x65676f73706c6974ULL;

    PersonaGraph pg;
    pg.lambda = lambda;
    pg.source_directed = g.directed();
    pg.source_edges = g.num_edges();
    pg.owner_labels_ = g.labels();
    pg.v2p.resize(g.num_nodes());

    // Persona creation; serialized in node-id order so persona ids are
    // deterministic. cluster_of[v] maps each clustering neighbor of v to
    // the persona of v owning it, sorted for binary search.
    std::vector<std::vector<std::pair<NodeId, PersonaId>>> cluster_of(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        EgoNetwork ego = ego_network(g, v);
        pg.source_max_degree = std::max(pg.source_max_degree, ego.members.size());
        auto clusters = cluster_ego(ego.graph, method, Rng::stream(seed, kEgoSalt, v).next_u64());

        if (clusters.empty()) {
            // Isolated node: keep one persona with an empty cluster so an
            // embedding row exists for every input node.
            PersonaId p = static_cast<PersonaId>(pg.owner.size());
            pg.owner.push_back(v);
            pg.owner_rank.push_back(0);
            pg.v2p[v].push_back(p);
            pg.p2c.emplace_back();
            continue;
        }
        for (const auto& cluster : clusters) {
            PersonaId p = static_cast<PersonaId>(pg.owner.size());
            pg.owner.push_back(v);
            pg.owner_rank.push_back(static_cast<std::uint32_t>(pg.v2p[v].size()));
            pg.v2p[v].push_back(p);
            std::vector<NodeId> parent_ids;
            parent_ids.reserve(cluster.size());
            for (NodeId local : cluster) parent_ids.push_back(ego.members[local]);
            for (NodeId u : parent_ids) cluster_of[v].push_back({u, p});
            pg.p2c.push_back(std::move(parent_ids));
        }
        std::sort(cluster_of[v].begin(), cluster_of[v].end());
    }

    auto persona_containing = [&](NodeId v, NodeId neighbor) -> PersonaId {
        const auto& entries = cluster_of[v];
        auto it = std::lower_bound(
            entries.begin(), entries.end(), neighbor,
            [](const std::pair<NodeId, PersonaId>& a, NodeId b) { return a.first < b; });
        if (it == entries.end() || it->first != neighbor)
            throw std::logic_error("persona graph: clusters do not cover a neighbor");
        return it->second;
    };

    // Original-edge inheritance: arc (u,v) goes to the persona of u whose
    // cluster holds v and the persona of v whose cluster holds u.
    std::vector<Edge> arcs;
    arcs.reserve(g.num_edges() * (g.directed() ? 1 : 2));
    for (const Edge& e : g.edges()) {
        PersonaId p = persona_containing(e.src, e.dst);
        PersonaId q = persona_containing(e.dst, e.src);
        arcs.push_back({p, q, e.weight});
        if (!g.directed()) arcs.push_back({q, p, e.weight});
    }

    // k_out counts original out-arcs only, before persona edges exist.
    std::vector<std::size_t> k_out(pg.owner.size(), 0);
    for (const Edge& a : arcs) ++k_out[a.src];

    // Persona clique: n_p(n_p - 1) arcs per node. A persona that inherited
    // only in-arcs would have k_out = 0 and weight-0 links to its
    // siblings, so the degree factor is floored at 1.
    for (const auto& personas : pg.v2p) {
        if (personas.size() < 2) continue;
        for (PersonaId src : personas) {
            double w = lambda * static_cast<double>(std::max<std::size_t>(k_out[src], 1));
            for (PersonaId dst : personas) {
                if (src != dst) arcs.push_back({src, dst, w});
            }
        }
    }

    pg.graph = Graph(static_cast<NodeId>(pg.owner.size()), true, std::move(arcs));
    pg.edge_kind.reserve(pg.graph.num_edges());
    for (const Edge& a : pg.graph.edges()) {
        pg.edge_kind.push_back(pg.owner[a.src] == pg.owner[a.dst]
                                   ? EdgeKind::persona
                                   : EdgeKind::original);
    }
    return pg;
}

std::size_t PersonaGraph::persona_arc_count() const {
    std::size_t count = 0;
    for (EdgeKind k : edge_kind) count += (k == EdgeKind::persona);
    return count;
}

std::size_t PersonaGraph::original_arc_count() const {
    return edge_kind.size() - persona_arc_count();
}

std::string PersonaGraph::persona_label(PersonaId p) const {
    return std::to_string(owner_labels_[owner[p]]) + "__" +
           std::to_string(owner_rank[p]);
}

std::vector<std::string> PersonaGraph::persona_labels() const {
    std::vector<std::string> out;
    out.reserve(num_personas());
    for (PersonaId p = 0; p < num_personas(); ++p) out.push_back(persona_label(p));
    return out;
}

PersonaEdgeBoundReport persona_edge_bound_check(const PersonaGraph& pg) {
    PersonaEdgeBoundReport report;
    report.persona_arcs = pg.persona_arc_count();
    report.persona_pairs = report.persona_arcs / 2;
    report.edge_bound = std::pow(static_cast<double>(pg.source_edges), 1.5);
    report.max_degree = pg.source_max_degree;
    report.sqrt_edges = std::sqrt(static_cast<double>(pg.source_edges));
    report.degree_condition =
        static_cast<double>(report.max_degree) < report.sqrt_edges;
    report.within_bound =
        static_cast<double>(report.persona_arcs) <= report.edge_bound;
    return report;
}

void save_persona_map(const PersonaGraph& pg, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << "persona_id\toriginal_label\tcluster_members\n";
    for (PersonaId p = 0; p < pg.num_personas(); ++p) {
        file << pg.persona_label(p) << '\t' << pg.source_label(pg.owner[p]) << '\t';
        const auto& cluster = pg.p2c[p];
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            if (i) file << ',';
            file << pg.source_label(cluster[i]);
        }
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace p2v
