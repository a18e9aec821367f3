#include "persona2vec/fetch.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <httplib.h>

#include "persona2vec/sha256.hpp"

namespace p2v {

const std::vector<DatasetSpec>& dataset_registry() {
    // Checksums are intentionally unpinned: the hosts occasionally
    // repackage the archives. The digest of every download is printed and
    // written to the manifest so a site can pin its own copies.
    static const std::vector<DatasetSpec> registry = {
        {"ppi", "https://snap.stanford.edu/node2vec/Homo_sapiens.mat", false, true, ""},
        {"ca-hepth", "https://snap.stanford.edu/data/ca-HepTh.txt.gz", false, false, ""},
        {"ca-astroph", "https://snap.stanford.edu/data/ca-AstroPh.txt.gz", false, false, ""},
        {"wiki-vote", "https://snap.stanford.edu/data/wiki-Vote.txt.gz", true, false, ""},
        {"soc-epinions", "https://snap.stanford.edu/data/soc-Epinions1.txt.gz", true, false, ""},
    };
    return registry;
}

const DatasetSpec& dataset_by_name(const std::string& name) {
    for (const DatasetSpec& spec : dataset_registry())
        if (spec.name == name) return spec;
    throw std::invalid_argument("unknown dataset: " + name);
}

std::string inflate_bytes(const std::string& compressed, bool gzip_header) {
    z_stream stream{};
    const int wbits = gzip_header ? 16 + MAX_WBITS : MAX_WBITS;
    if (inflateInit2(&stream, wbits) != Z_OK)
        throw std::runtime_error("inflate: init failed");

    std::string out;
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    stream.avail_in = static_cast<uInt>(compressed.size());
    char chunk[65536];
    int rc = Z_OK;
    do {
        stream.next_out = reinterpret_cast<Bytef*>(chunk);
        stream.avail_out = sizeof chunk;
        rc = inflate(&stream, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&stream);
            throw std::runtime_error("inflate: corrupt stream");
        }
        out.append(chunk, sizeof chunk - stream.avail_out);
    } while (rc != Z_STREAM_END && (stream.avail_in > 0 || stream.avail_out == 0));
    inflateEnd(&stream);
    if (rc != Z_STREAM_END) throw std::runtime_error("inflate: truncated stream");
    return out;
}

namespace {

// MAT v5 data type tags.
enum MatType : std::uint32_t {
    miINT8 = 1,
    miUINT8 = 2,
    miINT16 = 3,
    miUINT16 = 4,
    miINT32 = 5,
    miUINT32 = 6,
    miSINGLE = 7,
    miDOUBLE = 9,
    miINT64 = 12,
    miUINT64 = 13,
    miMATRIX = 14,
    miCOMPRESSED = 15,
};

constexpr std::uint32_t mxSPARSE_CLASS = 5;

class MatReader {
public:
    MatReader(const char* data, std::size_t size) : data_(data), size_(size) {}

    bool done() const { return offset_ >= size_; }

    struct Element {
        std::uint32_t type;
        const char* data;
        std::size_t size;
    };

    Element next_element() {
        require(8);
        std::uint32_t type = read_u32_at(offset_);
        std::uint32_t size = read_u32_at(offset_ + 4);
        if ((type & 0xffff0000u) != 0) {
            // Small data element: size and type packed into one word,
            // payload in the second word.
            const std::uint32_t small_size = type >> 16;
            Element e{type & 0xffffu, data_ + offset_ + 4, small_size};
            offset_ += 8;
            return e;
        }
        require(8 + size);
        Element e{type, data_ + offset_ + 8, size};
        offset_ += 8 + size;
        if (type != miCOMPRESSED) offset_ += (8 - offset_ % 8) % 8;  // pad to 8
        return e;
    }

private:
    std::uint32_t read_u32_at(std::size_t at) const {
        std::uint32_t v;
        std::memcpy(&v, data_ + at, 4);
        return v;
    }
    void require(std::size_t bytes) const {
        if (offset_ + bytes > size_) throw std::runtime_error("mat5: truncated element");
    }
    const char* data_;
    std::size_t size_;
    std::size_t offset_ = 0;
};

std::vector<double> numeric_array(const MatReader::Element& e) {
    std::vector<double> out;
    auto fill = [&](auto value_type) {
        using T = decltype(value_type);
        const std::size_t count = e.size / sizeof(T);
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            T v;
            std::memcpy(&v, e.data + i * sizeof(T), sizeof(T));
            out.push_back(static_cast<double>(v));
        }
    };
    switch (e.type) {
        case miINT8: fill(std::int8_t{}); break;
        case miUINT8: fill(std::uint8_t{}); break;
        case miINT16: fill(std::int16_t{}); break;
        case miUINT16: fill(std::uint16_t{}); break;
        case miINT32: fill(std::int32_t{}); break;
        case miUINT32: fill(std::uint32_t{}); break;
        case miSINGLE: fill(float{}); break;
        case miDOUBLE: fill(double{}); break;
        case miINT64: fill(std::int64_t{}); break;
        case miUINT64: fill(std::uint64_t{}); break;
        default: throw std::runtime_error("mat5: unsupported numeric type");
    }
    return out;
}

struct SparseMatrix {
    std::string name;
    std::uint64_t rows = 0, cols = 0;
    std::vector<double> ir, jc, pr;
};

bool parse_matrix(const MatReader::Element& matrix, SparseMatrix& out) {
    MatReader reader(matrix.data, matrix.size);

    const auto flags = reader.next_element();
    if (flags.type != miUINT32 || flags.size < 8) return false;
    std::uint32_t flag_word;
    std::memcpy(&flag_word, flags.data, 4);
    if ((flag_word & 0xff) != mxSPARSE_CLASS) return false;

    const auto dims = numeric_array(reader.next_element());
    if (dims.size() != 2) return false;
    out.rows = static_cast<std::uint64_t>(dims[0]);
    out.cols = static_cast<std::uint64_t>(dims[1]);

    const auto name = reader.next_element();
    out.name.assign(name.data, name.size);

    out.ir = numeric_array(reader.next_element());
    out.jc = numeric_array(reader.next_element());
    if (!reader.done()) out.pr = numeric_array(reader.next_element());
    return true;
}

}  // namespace

std::vector<RawEdge> mat5_sparse_edges(const std::string& bytes,
                                       const std::string& variable) {
    if (bytes.size() < 128) throw std::runtime_error("mat5: file too short");
    if (bytes[126] != 'I' || bytes[127] != 'M')
        throw std::runtime_error("mat5: unsupported endianness or not a MAT v5 file");

    std::vector<SparseMatrix> candidates;
    MatReader top(bytes.data() + 128, bytes.size() - 128);
    std::vector<std::string> decompressed_bufs;
    while (!top.done()) {
        auto element = top.next_element();
        if (element.type == miCOMPRESSED) {
            decompressed_bufs.emplace_back(
                inflate_bytes(std::string(element.data, element.size), false));
            const std::string& buf = decompressed_bufs.back();
            MatReader inner(buf.data(), buf.size());
            if (!inner.done()) element = inner.next_element();
        }
        if (element.type != miMATRIX) continue;
        SparseMatrix m;
        if (parse_matrix(element, m) && m.rows == m.cols) candidates.push_back(std::move(m));
    }
    if (candidates.empty())
        throw std::runtime_error("mat5: no square sparse matrix found");

    const SparseMatrix* chosen = &candidates.front();
    for (const SparseMatrix& m : candidates)
        if (m.name == variable) chosen = &m;

    std::vector<RawEdge> edges;
    std::unordered_set<std::uint64_t> seen;
    const std::size_t nnz = chosen->jc.empty()
                                ? 0
                                : static_cast<std::size_t>(chosen->jc.back());
    edges.reserve(nnz / 2);
    for (std::uint64_t col = 0; col < chosen->cols; ++col) {
        const auto begin = static_cast<std::size_t>(chosen->jc[col]);
        const auto end = static_cast<std::size_t>(chosen->jc[col + 1]);
        for (std::size_t k = begin; k < end; ++k) {
            const auto row = static_cast<std::uint64_t>(chosen->ir[k]);
            if (row == col) continue;
            const std::uint64_t lo = std::min(row, col), hi = std::max(row, col);
            if (!seen.insert((lo << 32) | hi).second) continue;
            const double value = k < chosen->pr.size() ? chosen->pr[k] : 1.0;
            edges.push_back({lo, hi, value});
        }
    }
    return edges;
}

void write_raw_edge_list(const std::vector<RawEdge>& edges, const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    for (const RawEdge& e : edges) {
        file << e.src << ' ' << e.dst;
        if (e.weight != 1.0) file << ' ' << e.weight;
        file << '\n';
    }
    if (!file) throw std::runtime_error("write failed: " + path);
}

namespace {

// P2V_DATASET_MIRROR=<base url> redirects downloads to
// <base>/<original file name>, for mirrored or air-gapped setups.
std::string effective_url(const std::string& url) {
    const char* mirror = std::getenv("P2V_DATASET_MIRROR");
    if (mirror == nullptr || *mirror == '\0') return url;
    std::string base(mirror);
    while (!base.empty() && base.back() == '/') base.pop_back();
    return base + url.substr(url.find_last_of('/'));
}

std::string http_get(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("bad url: " + url);
    const auto host_begin = scheme_end + 3;
    const auto path_begin = url.find('/', host_begin);
    const std::string origin = url.substr(0, path_begin);
    const std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);
    auto res = client.Get(path);
    if (!res)
        throw std::runtime_error("download failed: " + url + " (" +
                                 httplib::to_string(res.error()) + ")");
    if (res->status != 200)
        throw std::runtime_error("download failed: " + url + " (HTTP " +
                                 std::to_string(res->status) + ")");
    return res->body;
}

}  // namespace

FetchResult fetch_dataset(const DatasetSpec& spec, const std::string& out_dir,
                          bool force) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    FetchResult result;
    result.edge_list_path = (fs::path(out_dir) / (spec.name + ".edgelist")).string();
    if (!force && fs::exists(result.edge_list_path)) {
        result.raw_sha256 = "";
        return result;
    }

    const std::string raw = http_get(effective_url(spec.url));
    result.raw_sha256 = Sha256::of_string(raw);
    if (!spec.sha256.empty()) {
        if (result.raw_sha256 != spec.sha256)
            throw std::runtime_error("checksum mismatch for " + spec.name + ": got " +
                                     result.raw_sha256 + ", expected " + spec.sha256);
        result.checksum_verified = true;
    }

    if (spec.mat_format) {
        write_raw_edge_list(mat5_sparse_edges(raw), result.edge_list_path);
    } else if (spec.url.ends_with(".gz")) {
        const std::string text = inflate_bytes(raw, true);
        std::ofstream file(result.edge_list_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open for writing: " + result.edge_list_path);
        file.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!file) throw std::runtime_error("write failed: " + result.edge_list_path);
    } else {
        std::ofstream file(result.edge_list_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open for writing: " + result.edge_list_path);
        file.write(raw.data(), static_cast<std::streamsize>(raw.size()));
        if (!file) throw std::runtime_error("write failed: " + result.edge_list_path);
    }
    return result;
}

}  // namespace p2v
