#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string_view>

namespace beircast {

/// Buffered line reader over plain or gzip-compressed files (zlib reads both
/// transparently). Lines are handed out as views into an internal buffer that
/// stay valid until the next call.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    // Returns false at EOF. Strips the trailing '\n' and '\r'.
    bool next(std::string_view& line);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace beircast
