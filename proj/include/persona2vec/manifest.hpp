#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace p2v {

// Reproducibility record written next to every CLI output. In
// deterministic mode (threads = 0) rerunning the recorded command yields
// artifacts with identical checksums.
struct RunManifest {
    static constexpr int kSchemaVersion = 1;

    std::string command;
    nlohmann::json config;
    std::string input_path;
    std::string input_sha256;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> artifacts;  // path, sha256
    std::vector<std::pair<std::string, double>> timings_s;

    void add_artifact(const std::string& path);  // hashes the file
    nlohmann::json to_json() const;
    void save(const std::string& path) const;
};

}  // namespace p2v
