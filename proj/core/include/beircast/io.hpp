#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace beircast {

// Writes content to path atomically (temp file in the same directory, then
// rename). Creates parent directories as needed.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

} // namespace beircast
