#include "persona2vec/manifest.hpp"

#include <fstream>
#include <stdexcept>

#include "persona2vec/sha256.hpp"

namespace p2v {

void RunManifest::add_artifact(const std::string& path) {
    artifacts.push_back({path, Sha256::of_file(path)});
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["input"] = {{"path", input_path}, {"sha256", input_sha256}};
    doc["seed"] = seed;
    auto& artifact_list = doc["artifacts"] = nlohmann::json::array();
    for (const auto& [path, digest] : artifacts)
        artifact_list.push_back({{"path", path}, {"sha256", digest}});
    auto& timing_obj = doc["timings_s"] = nlohmann::json::object();
    for (const auto& [stage, secs] : timings_s) timing_obj[stage] = secs;
    return doc;
}

void RunManifest::save(const std::string& path) const {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << to_json().dump(2) << '\n';
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace p2v
