#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace beircast {

/// Incremental SHA-256. Used for config/artifact hashing in run manifests.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }
    // Finalizes and returns the lowercase hex digest. One-shot: do not reuse.
    std::string hex_digest();

    static std::string of_string(std::string_view s);
    static std::string of_file(const std::filesystem::path& path);

private:
    void process_block(const std::uint8_t* block);

    std::array<std::uint32_t, 8> state_;
    std::array<std::uint8_t, 64> buffer_;
    std::uint64_t total_len_ = 0;
    std::size_t buffer_len_ = 0;
};

} // namespace beircast
