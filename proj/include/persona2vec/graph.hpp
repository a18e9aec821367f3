#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace p2v {

using NodeId = std::uint32_t;
// Original node label as it appeared in the input file. Kept so that
// loaded graphs can be written back and results reported in the caller's
// id space even after relabeling / component extraction.
using Label = std::uint64_t;

struct Edge {
    NodeId src;
    NodeId dst;
    double weight;
};

struct Neighbor {
    NodeId node;
    double weight;
};

// Immutable sparse graph with dense node ids in [0, num_nodes()).
//
// Edges are stored once in a canonical list (undirected pairs normalized
// to src <= dst) plus CSR adjacency. Undirected graphs expose symmetric
// adjacency; directed graphs additionally keep in-neighbor lists for weak
// traversal. Construction drops self-loops and merges duplicate (src,dst)
// pairs by summing weights; both are counted for caller diagnostics.
//
// Safe for concurrent reads after construction.
class Graph {
public:
    Graph() = default;
    Graph(NodeId n_nodes, bool directed, std::vector<Edge> edges,
          std::vector<Label> labels = {});

    bool directed() const { return directed_; }
    NodeId num_nodes() const { return n_; }
    // Canonical edge count: arcs if directed, unordered pairs if not.
    std::size_t num_edges() const { return edges_.size(); }

    std::span<const Edge> edges() const { return edges_; }

    std::span<const Neighbor> out_neighbors(NodeId v) const {
        return {out_adj_.data() + out_offsets_[v],
                out_offsets_[v + 1] - out_offsets_[v]};
    }
    // For undirected graphs this is the same as out_neighbors.
    std::span<const Neighbor> in_neighbors(NodeId v) const {
        if (!directed_) return out_neighbors(v);
        return {in_adj_.data() + in_offsets_[v],
                in_offsets_[v + 1] - in_offsets_[v]};
    }

    std::size_t out_degree(NodeId v) const {
        return out_offsets_[v + 1] - out_offsets_[v];
    }
    std::size_t in_degree(NodeId v) const {
        if (!directed_) return out_degree(v);
        return in_offsets_[v + 1] - in_offsets_[v];
    }
    // Incident arc count; equals neighbor count for undirected graphs.
    std::size_t degree(NodeId v) const {
        return directed_ ? out_degree(v) + in_degree(v) : out_degree(v);
    }

    bool has_edge(NodeId src, NodeId dst) const;

    const std::vector<Label>& labels() const { return labels_; }
    Label label(NodeId v) const { return labels_[v]; }

    std::size_t self_loops_dropped() const { return self_loops_dropped_; }
    std::size_t duplicates_merged() const { return duplicates_merged_; }

private:
    bool directed_ = false;
    NodeId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<Label> labels_;
    std::vector<std::size_t> out_offsets_;
    std::vector<Neighbor> out_adj_;
    std::vector<std::size_t> in_offsets_;
    std::vector<Neighbor> in_adj_;
    std::size_t self_loops_dropped_ = 0;
    std::size_t duplicates_merged_ = 0;
};

// Reads a whitespace-separated edge list: "src dst [weight]" per line,
// '#' starts a comment line, labels are non-negative integers, omitted
// weights default to 1.0. Node ids are assigned densely in order of first
// appearance. Throws std::runtime_error with the offending line number on
// malformed input or non-positive weight.
Graph load_edge_list(const std::string& path, bool directed);

// Inverse of load_edge_list: same format, original labels restored.
void save_edge_list(const Graph& g, const std::string& path);

// Induced subgraph on `members` (ascending node ids), re-densified;
// labels carried over from g.
Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& members);

// Largest (weakly) connected component, ids re-densified in ascending
// order of the old ids. Ties between equal-sized components go to the one
// containing the smallest original label.
Graph largest_component(const Graph& g);

// True iff g minus `removed` is connected (weakly for directed graphs).
// Removed arcs are matched exactly for directed graphs and in either
// orientation for undirected ones. Graphs with fewer than two nodes count
// as connected.
bool is_connected(const Graph& g,
                  std::span<const std::pair<NodeId, NodeId>> removed = {});

}  // namespace p2v
