#pragma once

#include "beircast/date.hpp"
#include "beircast/taxonomy.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beircast {

/// One parsed GKG news item.
struct GkgRecord {
    std::string record_id;
    Date date;
    std::vector<std::string> themes;        // deduplicated, first-occurrence order
    double avg_tone = 0.0;                  // document tone in [-10, +10]
    std::vector<std::string> country_codes; // sorted unique FIPS codes

    bool operator==(const GkgRecord&) const = default;
};

/// Column indices of the fields we consume, configurable per input layout.
/// Defaults match the public GKG v2.1 export: the themes index points at the
/// enhanced field whose ",offset" suffixes are stripped, but a V1 themes
/// column parses identically.
struct GkgSchema {
    int record_id = 0;
    int date = 1;
    int themes = 8;
    int locations = 9;
    int tone = 15;

    int max_index() const;
};

enum class SkipReason : int {
    none = 0,
    bad_column_count,
    bad_tone,
    bad_date,
};

std::string_view skip_reason_name(SkipReason r);

struct ParsedLine {
    std::optional<GkgRecord> record;  // engaged iff skip == none
    SkipReason skip = SkipReason::none;
};

// Parses one tab-delimited GKG line. Malformed lines yield a skip marker with
// a reason code; this function never throws on data content.
ParsedLine parse_gkg_line(std::string_view line, const GkgSchema& schema);

struct IngestFilter {
    std::string target_country;  // FIPS code
    int min_ecofin_themes = 3;
};

// True iff the record has >= min_ecofin_themes distinct themes categorized as
// Ecofin and mentions the target country.
bool passes_filter(const GkgRecord& rec, const IngestFilter& filter, const ThemeTaxonomy& tax);

struct IngestStats {
    std::uint64_t lines_read = 0;
    std::uint64_t parsed = 0;
    std::uint64_t filtered_in = 0;
    std::uint64_t skipped_bad_column_count = 0;
    std::uint64_t skipped_bad_tone = 0;
    std::uint64_t skipped_bad_date = 0;
    std::vector<std::string> file_errors;

    std::uint64_t skipped() const {
        return skipped_bad_column_count + skipped_bad_tone + skipped_bad_date;
    }
    void add_skip(SkipReason r);
    IngestStats& operator+=(const IngestStats& other);
};

struct IngestResult {
    std::vector<GkgRecord> records;
    IngestStats stats;
};

// Parses and filters the given files (plain or gzip). Records appear in
// nondecreasing date order per file, files in argument order. An unreadable
// file is recorded in stats.file_errors and the rest proceed. `jobs` > 1
// parses whole files concurrently; output is identical for any job count.
IngestResult ingest_files(const std::vector<std::filesystem::path>& paths,
                          const IngestFilter& filter, const ThemeTaxonomy& tax,
                          const GkgSchema& schema = {}, int jobs = 1);

// Newline-delimited JSON record format used between the ingest and aggregate
// stages: {record_id, date, themes, avg_tone, country_codes}.
std::string record_to_json_line(const GkgRecord& rec);
GkgRecord record_from_json_line(std::string_view line);

void write_records_ndjson(const std::filesystem::path& path,
                          const std::vector<GkgRecord>& records);
std::vector<GkgRecord> read_records_ndjson(const std::filesystem::path& path);

} // namespace beircast
