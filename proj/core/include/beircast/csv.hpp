#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace beircast {

/// Minimal CSV support for the pipeline's file contracts. Fields are split on
/// commas; double-quoted fields may contain commas. All files are UTF-8.
namespace csv {

std::vector<std::string> split_line(std::string_view line);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column; throws DataError if absent.
    std::size_t column(std::string_view name) const;
};

// Reads the whole file; first line is the header. Skips blank lines.
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

} // namespace csv

// Fixed-precision float formatting used by every CSV/JSON artifact writer so
// that identical runs produce byte-identical outputs.
std::string format_double(double v);

} // namespace beircast
