#include "beircast/gkg.hpp"

#include "beircast/error.hpp"
#include "beircast/io.hpp"
#include "beircast/line_reader.hpp"
#include "beircast/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>

namespace beircast {

namespace {

using json = nlohmann::json;

// Splits `line` on tabs into `out`, stopping after max_field+1 fields have
// been captured plus one probe field (so column-count violations are
// detectable without scanning the whole line). Returns the field count seen
// (capped at max_field + 2).
int split_tabs(std::string_view line, int max_field, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    int count = 0;
    while (count <= max_field + 1) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            ++count;
            break;
        }
        out.push_back(line.substr(start, tab - start));
        ++count;
        start = tab + 1;
    }
    return count;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

void parse_themes(std::string_view field, std::vector<std::string>& out) {
    out.clear();
    std::size_t start = 0;
    while (start <= field.size()) {
        std::size_t sep = field.find(';', start);
        if (sep == std::string_view::npos) sep = field.size();
        std::string_view token = field.substr(start, sep - start);
        // Enhanced themes carry a ",charOffset" suffix.
        const std::size_t comma = token.find(',');
        if (comma != std::string_view::npos) token = token.substr(0, comma);
        if (!token.empty()) {
            bool seen = false;
            for (const auto& t : out) {
                if (t == token) { seen = true; break; }
            }
            if (!seen) out.emplace_back(token);
        }
        if (sep == field.size()) break;
        start = sep + 1;
    }
}

// Locations are ';'-separated blocks of '#'-separated subfields with the
// FIPS country code at subfield 2 (same position in V1 and V2 layouts).
void parse_country_codes(std::string_view field, std::vector<std::string>& out) {
    out.clear();
    std::size_t start = 0;
    while (start < field.size()) {
        std::size_t block_end = field.find(';', start);
        if (block_end == std::string_view::npos) block_end = field.size();
        const std::string_view block = field.substr(start, block_end - start);
        std::size_t h1 = block.find('#');
        if (h1 != std::string_view::npos) {
            std::size_t h2 = block.find('#', h1 + 1);
            if (h2 != std::string_view::npos) {
                std::size_t h3 = block.find('#', h2 + 1);
                if (h3 == std::string_view::npos) h3 = block.size();
                const std::string_view code = block.substr(h2 + 1, h3 - h2 - 1);
                if (!code.empty()) out.emplace_back(code);
            }
        }
        if (block_end == field.size()) break;
        start = block_end + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

} // namespace

int GkgSchema::max_index() const {
    return std::max({record_id, date, themes, locations, tone});
}

std::string_view skip_reason_name(SkipReason r) {
    switch (r) {
        case SkipReason::none: return "none";
        case SkipReason::bad_column_count: return "bad-column-count";
        case SkipReason::bad_tone: return "bad-tone";
        case SkipReason::bad_date: return "bad-date";
    }
    return "unknown";
}

ParsedLine parse_gkg_line(std::string_view line, const GkgSchema& schema) {
    thread_local std::vector<std::string_view> fields;
    const int needed = schema.max_index();
    const int count = split_tabs(line, needed, fields);
    if (count <= needed) return {std::nullopt, SkipReason::bad_column_count};

    const auto date = Date::parse_compact(fields[std::size_t(schema.date)]);
    if (!date) return {std::nullopt, SkipReason::bad_date};

    std::string_view tone_field = fields[std::size_t(schema.tone)];
    const std::size_t comma = tone_field.find(',');
    if (comma != std::string_view::npos) tone_field = tone_field.substr(0, comma);
    const auto tone = parse_double(tone_field);
    if (!tone || *tone < -10.0 || *tone > 10.0) return {std::nullopt, SkipReason::bad_tone};

    GkgRecord rec;
    rec.record_id = std::string(fields[std::size_t(schema.record_id)]);
    rec.date = *date;
    rec.avg_tone = *tone;
    parse_themes(fields[std::size_t(schema.themes)], rec.themes);
    parse_country_codes(fields[std::size_t(schema.locations)], rec.country_codes);
    return {std::move(rec), SkipReason::none};
}

bool passes_filter(const GkgRecord& rec, const IngestFilter& filter, const ThemeTaxonomy& tax) {
    if (!std::binary_search(rec.country_codes.begin(), rec.country_codes.end(),
                            filter.target_country)) {
        return false;
    }
    // The parser dedupes themes, but records can also arrive hand-built;
    // duplicates must count once toward the threshold.
    thread_local std::vector<std::string_view> seen;
    seen.clear();
    int ecofin = 0;
    for (const auto& theme : rec.themes) {
        if (std::find(seen.begin(), seen.end(), theme) != seen.end()) continue;
        seen.push_back(theme);
        const auto cat = tax.categorize(theme);
        if (cat == Category::Ecofin && ++ecofin >= filter.min_ecofin_themes) return true;
    }
    return false;
}

void IngestStats::add_skip(SkipReason r) {
    switch (r) {
        case SkipReason::bad_column_count: ++skipped_bad_column_count; break;
        case SkipReason::bad_tone: ++skipped_bad_tone; break;
        case SkipReason::bad_date: ++skipped_bad_date; break;
        case SkipReason::none: break;
    }
}

IngestStats& IngestStats::operator+=(const IngestStats& other) {
    lines_read += other.lines_read;
    parsed += other.parsed;
    filtered_in += other.filtered_in;
    skipped_bad_column_count += other.skipped_bad_column_count;
    skipped_bad_tone += other.skipped_bad_tone;
    skipped_bad_date += other.skipped_bad_date;
    file_errors.insert(file_errors.end(), other.file_errors.begin(), other.file_errors.end());
    return *this;
}

IngestResult ingest_files(const std::vector<std::filesystem::path>& paths,
                          const IngestFilter& filter, const ThemeTaxonomy& tax,
                          const GkgSchema& schema, int jobs) {
    if (filter.min_ecofin_themes < 1) {
        throw DataError("ingest filter: min_ecofin_themes must be >= 1");
    }
    std::vector<IngestResult> per_file(paths.size());
    parallel_for(paths.size(), jobs, [&](std::size_t i) {
        auto& out = per_file[i];
        try {
            LineReader reader(paths[i]);
            std::string_view line;
            while (reader.next(line)) {
                if (line.empty()) continue;
                ++out.stats.lines_read;
                ParsedLine parsed = parse_gkg_line(line, schema);
                if (!parsed.record) {
                    out.stats.add_skip(parsed.skip);
                    continue;
                }
                ++out.stats.parsed;
                if (passes_filter(*parsed.record, filter, tax)) {
                    ++out.stats.filtered_in;
                    out.records.push_back(std::move(*parsed.record));
                }
            }
            // Raw exports are normally date-ordered already; make it a guarantee.
            std::stable_sort(out.records.begin(), out.records.end(),
                             [](const GkgRecord& a, const GkgRecord& b) { return a.date < b.date; });
        } catch (const DataError& e) {
            out = IngestResult{};
            out.stats.file_errors.push_back(paths[i].string() + ": " + e.what());
        }
    });

    IngestResult merged;
    for (auto& part : per_file) {
        merged.stats += part.stats;
        merged.records.insert(merged.records.end(),
                              std::make_move_iterator(part.records.begin()),
                              std::make_move_iterator(part.records.end()));
    }
    return merged;
}

std::string record_to_json_line(const GkgRecord& rec) {
    json j;
    j["record_id"] = rec.record_id;
    j["date"] = rec.date.to_iso();
    j["themes"] = rec.themes;
    j["avg_tone"] = rec.avg_tone;
    j["country_codes"] = rec.country_codes;
    return j.dump();
}

GkgRecord record_from_json_line(std::string_view line) {
    const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw DataError("malformed record JSON line");
    GkgRecord rec;
    try {
        rec.record_id = j.at("record_id").get<std::string>();
        const auto date = Date::parse_iso(j.at("date").get<std::string>());
        if (!date) throw DataError("bad date in record JSON");
        rec.date = *date;
        rec.themes = j.at("themes").get<std::vector<std::string>>();
        rec.avg_tone = j.at("avg_tone").get<double>();
        rec.country_codes = j.at("country_codes").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw DataError(std::string("record JSON missing field: ") + e.what());
    }
    return rec;
}

void write_records_ndjson(const std::filesystem::path& path,
                          const std::vector<GkgRecord>& records) {
    std::string body;
    for (const auto& rec : records) {
        body += record_to_json_line(rec);
        body += '\n';
    }
    atomic_write_file(path, body);
}

std::vector<GkgRecord> read_records_ndjson(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open records file: " + path.string());
    std::vector<GkgRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(record_from_json_line(line));
    }
    return out;
}

} // namespace beircast
