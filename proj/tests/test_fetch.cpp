#include <doctest.h>
#include <httplib.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "persona2vec/fetch.hpp"
#include "persona2vec/graph.hpp"
#include "persona2vec/sha256.hpp"
#include "support/test_util.hpp"

using namespace p2v;
using namespace testutil;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    REQUIRE(file);
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE_BEGIN("fetch");

TEST_CASE("sha256 known vectors") {
    CHECK(Sha256::of_string("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(Sha256::of_string("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    // spans a block boundary
    CHECK(Sha256::of_string("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("gzip inflate") {
    const std::string data =
        slurp(std::string(PERSONA2VEC_TEST_DATA) + "/tiny_edges.txt.gz");
    CHECK(inflate_bytes(data, true) == "# tiny\n0 1\n1 2 2.5\n");
    CHECK_THROWS_AS(inflate_bytes("not gzip at all", true), std::runtime_error);
}

TEST_CASE("mat5 sparse extraction, plain and compressed") {
    const std::set<std::pair<std::uint64_t, std::uint64_t>> expected{
        {0, 1}, {0, 4}, {1, 2}, {1, 3}, {2, 3}, {3, 4}};
    for (const char* name : {"tiny_sparse_plain.mat", "tiny_sparse_zlib.mat"}) {
        const std::string bytes =
            slurp(std::string(PERSONA2VEC_TEST_DATA) + "/" + name);
        auto edges = mat5_sparse_edges(bytes, "network");
        std::set<std::pair<std::uint64_t, std::uint64_t>> got;
        for (const RawEdge& e : edges) {
            CHECK(e.weight == 1.0);
            got.insert({e.src, e.dst});
        }
        CHECK(got == expected);
    }
}

TEST_CASE("mat5 rejects garbage") {
    CHECK_THROWS_AS(mat5_sparse_edges("short"), std::runtime_error);
    std::string not_mat(256, 'x');
    CHECK_THROWS_AS(mat5_sparse_edges(not_mat), std::runtime_error);
}

TEST_CASE("raw edge list write + load round trip") {
    std::vector<RawEdge> edges{{0, 1, 1.0}, {1, 2, 2.5}};
    const auto path = (temp_dir() / "raw.edgelist").string();
    write_raw_edge_list(edges, path);
    Graph g = load_edge_list(path, false);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
}

TEST_CASE("fetch end to end against a local mirror") {
    // Serve the fixtures from an in-process server and point the mirror
    // override at it; exercises download, checksum recording, gunzip and
    // mat conversion without leaving the host.
    const std::string gz =
        slurp(std::string(PERSONA2VEC_TEST_DATA) + "/tiny_edges.txt.gz");
    const std::string mat =
        slurp(std::string(PERSONA2VEC_TEST_DATA) + "/tiny_sparse_zlib.mat");

    httplib::Server server;
    server.Get("/ca-HepTh.txt.gz", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(gz, "application/gzip");
    });
    server.Get("/Homo_sapiens.mat", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(mat, "application/octet-stream");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    const std::string mirror = "http://127.0.0.1:" + std::to_string(port);
    setenv("P2V_DATASET_MIRROR", mirror.c_str(), 1);
    const auto out_dir = (temp_dir() / "fetch_e2e").string();
    std::filesystem::remove_all(out_dir);

    FetchResult hepth = fetch_dataset(dataset_by_name("ca-hepth"), out_dir);
    CHECK(hepth.raw_sha256 == Sha256::of_string(gz));
    Graph g = load_edge_list(hepth.edge_list_path, false);
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);

    FetchResult ppi = fetch_dataset(dataset_by_name("ppi"), out_dir);
    Graph ppi_graph = load_edge_list(ppi.edge_list_path, false);
    CHECK(ppi_graph.num_nodes() == 5);
    CHECK(ppi_graph.num_edges() == 6);

    // existing outputs are kept unless forced
    FetchResult again = fetch_dataset(dataset_by_name("ppi"), out_dir);
    CHECK(again.raw_sha256.empty());

    unsetenv("P2V_DATASET_MIRROR");
    server.stop();
    server_thread.join();
}

TEST_CASE("dataset registry is complete") {
    CHECK(dataset_registry().size() == 5);
    CHECK(dataset_by_name("ppi").mat_format);
    CHECK(dataset_by_name("wiki-vote").directed);
    CHECK(dataset_by_name("soc-epinions").directed);
    CHECK_FALSE(dataset_by_name("ca-hepth").directed);
    CHECK_THROWS_AS(dataset_by_name("nope"), std::invalid_argument);
}

TEST_SUITE_END();
