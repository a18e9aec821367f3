#include "persona2vec/graph.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace p2v {

namespace {

std::uint64_t arc_key(NodeId u, NodeId v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

Graph::Graph(NodeId n_nodes, bool directed, std::vector<Edge> edges,
             std::vector<Label> labels)
    : directed_(directed), n_(n_nodes), labels_(std::move(labels)) {
    if (labels_.empty()) {
        labels_.resize(n_);
        for (NodeId v = 0; v < n_; ++v) labels_[v] = v;
    }
    if (labels_.size() != n_)
        throw std::invalid_argument("graph: label count does not match node count");

    edges_.reserve(edges.size());
    for (Edge e : edges) {
        if (e.src >= n_ || e.dst >= n_)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (e.src == e.dst) {
            ++self_loops_dropped_;
            continue;
        }
        if (!directed_ && e.src > e.dst) std::swap(e.src, e.dst);
        edges_.push_back(e);
    }

    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    std::size_t out = 0;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (out > 0 && edges_[out - 1].src == edges_[i].src &&
            edges_[out - 1].dst == edges_[i].dst) {
            edges_[out - 1].weight += edges_[i].weight;
            ++duplicates_merged_;
        } else {
            edges_[out++] = edges_[i];
        }
    }
    edges_.resize(out);

    // CSR adjacency, neighbors sorted by id within each node.
    std::vector<std::size_t> out_count(n_ + 1, 0);
    std::vector<std::size_t> in_count(n_ + 1, 0);
    for (const Edge& e : edges_) {
        ++out_count[e.src];
        if (directed_)
            ++in_count[e.dst];
        else
            ++out_count[e.dst];
    }
    out_offsets_.assign(n_ + 1, 0);
    for (NodeId v = 0; v < n_; ++v)
        out_offsets_[v + 1] = out_offsets_[v] + out_count[v];
    out_adj_.resize(out_offsets_[n_]);
    std::vector<std::size_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
    for (const Edge& e : edges_) {
        out_adj_[cursor[e.src]++] = {e.dst, e.weight};
        if (!directed_) out_adj_[cursor[e.dst]++] = {e.src, e.weight};
    }
    if (directed_) {
        in_offsets_.assign(n_ + 1, 0);
        for (NodeId v = 0; v < n_; ++v)
            in_offsets_[v + 1] = in_offsets_[v] + in_count[v];
        in_adj_.resize(in_offsets_[n_]);
        std::vector<std::size_t> icursor(in_offsets_.begin(), in_offsets_.end() - 1);
        for (const Edge& e : edges_) in_adj_[icursor[e.dst]++] = {e.src, e.weight};
        for (NodeId v = 0; v < n_; ++v) {
            std::sort(in_adj_.begin() + in_offsets_[v],
                      in_adj_.begin() + in_offsets_[v + 1],
                      [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        }
    }
    for (NodeId v = 0; v < n_; ++v) {
        std::sort(out_adj_.begin() + out_offsets_[v],
                  out_adj_.begin() + out_offsets_[v + 1],
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    }
}

bool Graph::has_edge(NodeId src, NodeId dst) const {
    if (src >= n_ || dst >= n_) return false;
    auto nbrs = out_neighbors(src);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), dst,
                               [](const Neighbor& a, NodeId b) { return a.node < b; });
    return it != nbrs.end() && it->node == dst;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line_no << ": " << what;
    throw std::runtime_error(msg.str());
}

}  // namespace

Graph load_edge_list(const std::string& path, bool directed) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open edge list: " + path);

    std::unordered_map<Label, NodeId> id_of;
    std::vector<Label> labels;
    std::vector<Edge> edges;

    auto intern = [&](Label label) -> NodeId {
        auto [it, inserted] = id_of.try_emplace(label, static_cast<NodeId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;

        std::istringstream fields(line);
        std::string src_tok, dst_tok, weight_tok, extra;
        if (!(fields >> src_tok >> dst_tok))
            parse_fail(path, line_no, "expected 'src dst [weight]', got: " + line);
        double weight = 1.0;
        if (fields >> weight_tok) {
            errno = 0;
            char* end = nullptr;
            weight = std::strtod(weight_tok.c_str(), &end);
            if (errno != 0 || end == weight_tok.c_str() || *end != '\0')
                parse_fail(path, line_no, "bad weight token '" + weight_tok + "'");
            if (!(weight > 0))
                parse_fail(path, line_no, "non-positive edge weight " + weight_tok);
        }
        if (fields >> extra)
            parse_fail(path, line_no, "trailing field '" + extra + "'");

        Label endpoints[2];
        const std::string* toks[2] = {&src_tok, &dst_tok};
        for (int i = 0; i < 2; ++i) {
            errno = 0;
            char* end = nullptr;
            unsigned long long value = std::strtoull(toks[i]->c_str(), &end, 10);
            if (errno != 0 || end == toks[i]->c_str() || *end != '\0' ||
                toks[i]->front() == '-')
                parse_fail(path, line_no, "bad node label '" + *toks[i] + "'");
            endpoints[i] = value;
        }
        edges.push_back({intern(endpoints[0]), intern(endpoints[1]), weight});
    }

    NodeId n = static_cast<NodeId>(labels.size());
    return Graph(n, directed, std::move(edges), std::move(labels));
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    for (const Edge& e : g.edges()) {
        file << g.label(e.src) << ' ' << g.label(e.dst);
        if (e.weight != 1.0) file << ' ' << e.weight;
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& members) {
    std::unordered_map<NodeId, NodeId> new_id;
    new_id.reserve(members.size());
    std::vector<Label> labels;
    labels.reserve(members.size());
    for (NodeId v : members) {
        new_id.emplace(v, static_cast<NodeId>(labels.size()));
        labels.push_back(g.label(v));
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        auto s = new_id.find(e.src);
        auto d = new_id.find(e.dst);
        if (s != new_id.end() && d != new_id.end())
            edges.push_back({s->second, d->second, e.weight});
    }
    return Graph(static_cast<NodeId>(members.size()), g.directed(),
                 std::move(edges), std::move(labels));
}

Graph largest_component(const Graph& g) {
    if (g.num_nodes() == 0)
        throw std::invalid_argument("largest_component: empty graph");

    std::vector<int> component(g.num_nodes(), -1);
    int n_components = 0;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < g.num_nodes(); ++start) {
        if (component[start] >= 0) continue;
        int c = n_components++;
        component[start] = c;
        stack.push_back(start);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            auto visit = [&](NodeId u) {
                if (component[u] < 0) {
                    component[u] = c;
                    stack.push_back(u);
                }
            };
            for (const Neighbor& nb : g.out_neighbors(v)) visit(nb.node);
            if (g.directed())
                for (const Neighbor& nb : g.in_neighbors(v)) visit(nb.node);
        }
    }

    std::vector<std::size_t> sizes(n_components, 0);
    std::vector<Label> min_label(n_components, ~Label{0});
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        ++sizes[component[v]];
        min_label[component[v]] = std::min(min_label[component[v]], g.label(v));
    }
    int best = 0;
    for (int c = 1; c < n_components; ++c) {
        if (sizes[c] > sizes[best] ||
            (sizes[c] == sizes[best] && min_label[c] < min_label[best]))
            best = c;
    }

    std::vector<NodeId> members;
    members.reserve(sizes[best]);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (component[v] == best) members.push_back(v);
    return induced_subgraph(g, members);
}

bool is_connected(const Graph& g,
                  std::span<const std::pair<NodeId, NodeId>> removed) {
    if (g.num_nodes() <= 1) return true;

    std::unordered_map<std::uint64_t, bool> removed_keys;
    removed_keys.reserve(removed.size() * 2);
    for (auto [u, v] : removed) {
        if (g.directed()) {
            removed_keys.emplace(arc_key(u, v), true);
        } else {
            removed_keys.emplace(arc_key(u, v), true);
            removed_keys.emplace(arc_key(v, u), true);
        }
    }
    auto is_removed = [&](NodeId u, NodeId v) {
        return !removed_keys.empty() && removed_keys.count(arc_key(u, v)) > 0;
    };

    std::vector<char> seen(g.num_nodes(), 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (const Neighbor& nb : g.out_neighbors(v)) {
            if (!seen[nb.node] && !is_removed(v, nb.node)) {
                seen[nb.node] = 1;
                ++visited;
                stack.push_back(nb.node);
            }
        }
        if (g.directed()) {
            for (const Neighbor& nb : g.in_neighbors(v)) {
                if (!seen[nb.node] && !is_removed(nb.node, v)) {
                    seen[nb.node] = 1;
                    ++visited;
                    stack.push_back(nb.node);
                }
            }
        }
    }
    return visited == g.num_nodes();
}

}  // namespace p2v
