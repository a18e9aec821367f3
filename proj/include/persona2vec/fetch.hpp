#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace p2v {

// Benchmark datasets, downloadable by name so the repository itself stays
// data-free. The .mat entry is a v5 MATLAB file holding a sparse
// adjacency matrix; the rest are gzipped SNAP edge lists.
struct DatasetSpec {
    std::string name;       // registry key, also the output file stem
    std::string url;
    bool directed = false;
    bool mat_format = false;
    // Pinned sha256 of the raw download; empty = unpinned, the computed
    // digest is reported and recorded instead of enforced.
    std::string sha256;
};

const std::vector<DatasetSpec>& dataset_registry();
const DatasetSpec& dataset_by_name(const std::string& name);

struct FetchResult {
    std::string edge_list_path;
    std::string raw_sha256;
    bool checksum_verified = false;  // true only when a pin existed and matched
};

// Downloads, verifies, converts to "<out_dir>/<name>.edgelist". Existing
// outputs are kept unless force is set. Throws on network or checksum
// failure.
FetchResult fetch_dataset(const DatasetSpec& spec, const std::string& out_dir,
                          bool force = false);

// zlib/gzip inflate of a whole in-memory buffer.
std::string inflate_bytes(const std::string& compressed, bool gzip_header);

struct RawEdge {
    std::uint64_t src;
    std::uint64_t dst;
    double weight;
};

// Extracts the square sparse matrix named `variable` (or the first square
// sparse one if the name is absent) from a little-endian MAT v5 buffer
// and returns its off-diagonal nonzeros as undirected edges (row < col,
// 0-based indices as labels). Handles compressed and uncompressed
// elements.
std::vector<RawEdge> mat5_sparse_edges(const std::string& bytes,
                                       const std::string& variable = "network");

void write_raw_edge_list(const std::vector<RawEdge>& edges, const std::string& path);

}  // namespace p2v
