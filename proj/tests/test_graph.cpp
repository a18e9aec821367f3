#include <doctest.h>

#include <filesystem>
#include <set>

#include "persona2vec/graph.hpp"
#include "support/test_util.hpp"

using namespace p2v;
using namespace testutil;

TEST_SUITE_BEGIN("graph");

TEST_CASE("load: minimal path graph") {
    const auto path = write_file("min_path.txt", "0 1\n1 2\n");
    Graph g = load_edge_list(path, false);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
    for (const Edge& e : g.edges()) CHECK(e.weight == 1.0);
}

TEST_CASE("load: comments, weights and label preservation") {
    const auto path = write_file("comment.txt", "# comment\n5 7 2.5\n");
    Graph g = load_edge_list(path, false);
    CHECK(g.num_nodes() == 2);
    CHECK(g.num_edges() == 1);
    CHECK(g.edges()[0].weight == 2.5);
    CHECK(g.label(0) == 5);
    CHECK(g.label(1) == 7);
}

TEST_CASE("load: first-appearance id assignment is deterministic") {
    const auto path = write_file("order.txt", "30 10\n10 20\n20 30\n");
    Graph g = load_edge_list(path, false);
    CHECK(g.label(0) == 30);
    CHECK(g.label(1) == 10);
    CHECK(g.label(2) == 20);
}

TEST_CASE("load: malformed input reports the line number") {
    const auto one_field = write_file("bad1.txt", "0 1\nnope\n");
    CHECK_THROWS_WITH_AS(load_edge_list(one_field, false),
                         doctest::Contains(":2:"), std::runtime_error);

    const auto bad_weight = write_file("bad2.txt", "0 1 zero\n");
    CHECK_THROWS_WITH_AS(load_edge_list(bad_weight, false),
                         doctest::Contains(":1:"), std::runtime_error);

    const auto extra = write_file("bad3.txt", "0 1 1.0 junk\n");
    CHECK_THROWS_AS(load_edge_list(extra, false), std::runtime_error);

    const auto negative_label = write_file("bad4.txt", "-3 1\n");
    CHECK_THROWS_AS(load_edge_list(negative_label, false), std::runtime_error);
}

TEST_CASE("load: non-positive weights rejected") {
    const auto zero = write_file("w0.txt", "0 1 0\n");
    CHECK_THROWS_AS(load_edge_list(zero, false), std::runtime_error);
    const auto negative = write_file("wneg.txt", "0 1 -2\n");
    CHECK_THROWS_AS(load_edge_list(negative, false), std::runtime_error);
}

TEST_CASE("normalization: self-loops dropped, duplicates merged") {
    const auto path = write_file("dups.txt", "1 1\n1 2 2.0\n2 1 3.0\n1 2\n");
    Graph g = load_edge_list(path, false);
    CHECK(g.num_nodes() == 2);
    CHECK(g.num_edges() == 1);
    CHECK(g.self_loops_dropped() == 1);
    CHECK(g.duplicates_merged() == 2);
    CHECK(g.edges()[0].weight == 6.0);

    Graph d = load_edge_list(path, true);
    CHECK(d.num_edges() == 2);  // 1->2 (merged) and 2->1 stay distinct arcs
    CHECK(d.duplicates_merged() == 1);
}

TEST_CASE("adjacency: degree sums") {
    Graph und = erdos_renyi(40, 120, 7);
    std::size_t out_sum = 0;
    for (NodeId v = 0; v < und.num_nodes(); ++v) out_sum += und.out_degree(v);
    CHECK(out_sum == 2 * und.num_edges());

    Graph dir = erdos_renyi(40, 120, 8, true);
    std::size_t in_sum = 0;
    out_sum = 0;
    for (NodeId v = 0; v < dir.num_nodes(); ++v) {
        out_sum += dir.out_degree(v);
        in_sum += dir.in_degree(v);
    }
    CHECK(out_sum == dir.num_edges());
    CHECK(in_sum == dir.num_edges());
}

TEST_CASE("load/save/load round trip") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        Graph source = erdos_renyi(25, 60, seed, seed % 2 == 0);
        const auto seed_path =
            (temp_dir() / ("roundtrip_src" + std::to_string(seed))).string();
        save_edge_list(source, seed_path);

        Graph g = load_edge_list(seed_path, source.directed());
        const auto path = (temp_dir() / ("roundtrip" + std::to_string(seed))).string();
        save_edge_list(g, path);
        Graph h = load_edge_list(path, g.directed());
        REQUIRE(h.num_nodes() == g.num_nodes());
        REQUIRE(h.num_edges() == g.num_edges());

        // identical as labeled graphs (internal ids may permute)
        auto labeled_edges = [](const Graph& gr) {
            std::set<std::tuple<Label, Label, double>> out;
            for (const Edge& e : gr.edges()) {
                Label a = gr.label(e.src), b = gr.label(e.dst);
                if (!gr.directed() && a > b) std::swap(a, b);
                out.insert({a, b, e.weight});
            }
            return out;
        };
        CHECK(labeled_edges(h) == labeled_edges(g));
        CHECK(std::set<Label>(h.labels().begin(), h.labels().end()) ==
              std::set<Label>(g.labels().begin(), g.labels().end()));
    }
}

TEST_CASE("largest_component: basic and tie-break") {
    // path(5) plus an isolated node
    Graph g(6, false, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
    Graph lcc = largest_component(g);
    CHECK(lcc.num_nodes() == 5);
    CHECK(lcc.num_edges() == 4);

    // two disjoint triangles; labels make the second one smaller
    const auto path = write_file("twotri.txt", "10 11\n11 12\n12 10\n3 4\n4 5\n5 3\n");
    Graph two = load_edge_list(path, false);
    Graph chosen = largest_component(two);
    REQUIRE(chosen.num_nodes() == 3);
    std::set<Label> labels(chosen.labels().begin(), chosen.labels().end());
    CHECK(labels == std::set<Label>{3, 4, 5});
}

TEST_CASE("largest_component: directed uses weak connectivity") {
    Graph g(5, true, {{0, 1, 1}, {2, 1, 1}, {3, 4, 1}});
    Graph lcc = largest_component(g);
    CHECK(lcc.num_nodes() == 3);
    CHECK(brute_force_connected(lcc));
}

TEST_CASE("largest_component output is connected") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Graph g = erdos_renyi(30, 35, seed);  // sparse enough to fragment
        Graph lcc = largest_component(g);
        CHECK(is_connected(lcc));
        CHECK(brute_force_connected(lcc));
    }
}

TEST_CASE("is_connected with removals") {
    Graph tri = triangle();
    std::vector<std::pair<NodeId, NodeId>> one_edge{{0, 1}};
    CHECK(is_connected(tri, one_edge));

    Graph p3 = path_graph(3);
    std::vector<std::pair<NodeId, NodeId>> middle{{1, 2}};
    CHECK_FALSE(is_connected(p3, middle));

    Graph star = star_graph(5);
    for (NodeId leaf = 1; leaf <= 5; ++leaf) {
        std::vector<std::pair<NodeId, NodeId>> spoke{{0, leaf}};
        CHECK_FALSE(is_connected(star, spoke));
    }
}

TEST_CASE("is_connected: undirected removal matches either orientation") {
    Graph p2 = path_graph(2);
    std::vector<std::pair<NodeId, NodeId>> reversed{{1, 0}};
    CHECK_FALSE(is_connected(p2, reversed));
}

TEST_CASE("is_connected: directed arcs removed individually") {
    // weak path 0->1, plus reverse arc 1->0; removing only one keeps
    // the weak link alive
    Graph g(2, true, {{0, 1, 1}, {1, 0, 1}});
    std::vector<std::pair<NodeId, NodeId>> one{{0, 1}};
    CHECK(is_connected(g, one));
    std::vector<std::pair<NodeId, NodeId>> both{{0, 1}, {1, 0}};
    CHECK_FALSE(is_connected(g, both));
}

TEST_SUITE_END();
