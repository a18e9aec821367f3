#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace p2v {

// Minimal streaming SHA-256, used for artifact and dataset checksums.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    std::string hex_digest();  // finalizes

    static std::string of_file(const std::string& path);
    static std::string of_string(const std::string& data);

private:
    void process_block(const std::uint8_t* block);
    std::uint32_t state_[8];
    std::uint64_t total_bits_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffered_ = 0;
};

}  // namespace p2v
