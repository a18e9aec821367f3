#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "persona2vec/graph.hpp"

namespace p2v {

using PersonaId = std::uint32_t;

enum class LocalClustering { connected_components, label_propagation };

LocalClustering parse_clustering(const std::string& name);  // "cc" | "lp"

enum class EdgeKind : std::uint8_t { original, persona };

// Induced subgraph on a node's neighbors with the ego removed. For
// directed graphs the member set is the union of in- and out-neighbors;
// edge directions and weights are inherited. `members` lists the parent
// node ids in ascending order, matching the ego graph's local ids.
struct EgoNetwork {
    Graph graph;
    std::vector<NodeId> members;
};

EgoNetwork ego_network(const Graph& g, NodeId ego);

// Disjoint covering clusters of an ego-network, as sets of the ego
// graph's local node ids. Edges are treated as undirected here regardless
// of the input's directedness.
//
// connected_components: one cluster per component.
// label_propagation: asynchronous propagation with per-sweep shuffled
// node order (seeded), at most 100 sweeps, label ties broken by the
// smallest label. Neighbor labels are weighted by edge weight.
//
// Clusters are ordered by their smallest member, members ascending.
std::vector<std::vector<NodeId>> cluster_ego(const Graph& ego,
                                             LocalClustering method,
                                             std::uint64_t seed);

// The split graph. Internally always directed: an undirected original
// edge becomes two arcs. Personas of one node form a complete directed
// clique of persona edges; each original edge is inherited by exactly one
// ordered persona pair (one per direction when the input is undirected).
struct PersonaGraph {
    Graph graph;                                // directed
    std::vector<std::vector<PersonaId>> v2p;    // node -> its personas, in cluster order
    std::vector<NodeId> owner;                  // persona -> original node
    std::vector<std::uint32_t> owner_rank;      // persona -> index within owner's list
    std::vector<std::vector<NodeId>> p2c;       // persona -> local cluster (parent ids, ascending)
    std::vector<EdgeKind> edge_kind;            // aligned with graph.edges()
    double lambda = 0.0;

    // Source-graph facts recorded for reporting and bound checks.
    std::size_t source_edges = 0;
    std::size_t source_max_degree = 0;  // max size of a clustering neighbor set
    bool source_directed = false;

    std::size_t num_personas() const { return owner.size(); }
    std::size_t persona_arc_count() const;
    std::size_t original_arc_count() const;

    // "<original label>__<rank>"
    std::string persona_label(PersonaId p) const;
    std::vector<std::string> persona_labels() const;
    Label source_label(NodeId v) const { return owner_labels_[v]; }

private:
    friend PersonaGraph build_persona_graph(const Graph&, LocalClustering,
                                            double, std::uint64_t);
    std::vector<Label> owner_labels_;
};

// Splits every node into one persona per local cluster of its
// ego-network (isolated nodes keep a single persona with an empty
// cluster), inherits original edges onto the unique persona pair whose
// clusters contain each other's endpoint, and connects the personas of
// each node with a directed clique of persona edges weighted
// lambda * max(k_out, 1), where k_out counts the persona's original
// out-arcs. Throws std::invalid_argument for lambda < 0.
//
// Deterministic for fixed (g, method, lambda, seed).
PersonaGraph build_persona_graph(const Graph& g, LocalClustering method,
                                 double lambda, std::uint64_t seed);

struct PersonaEdgeBoundReport {
    std::size_t persona_arcs = 0;      // ordered persona pairs
    std::size_t persona_pairs = 0;     // unordered, = arcs / 2
    double edge_bound = 0.0;           // |E|^(3/2) of the source graph
    std::size_t max_degree = 0;
    double sqrt_edges = 0.0;
    bool degree_condition = false;     // max_degree < sqrt(|E|)
    bool within_bound = false;         // persona_arcs <= edge_bound; meaningful
                                       // only when degree_condition holds
};

PersonaEdgeBoundReport persona_edge_bound_check(const PersonaGraph& pg);

// Persona-map export: TSV with persona_id, original_label and the
// comma-separated original labels of the persona's local cluster.
void save_persona_map(const PersonaGraph& pg, const std::string& path);

}  // namespace p2v
