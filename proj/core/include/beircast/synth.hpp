#pragma once

#include "beircast/date.hpp"
#include "beircast/market_data.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace beircast {

/// Synthetic dataset generator: GKG-format news files plus a matching market
/// CSV. A fraction `signal_strength` of each day's news tone encodes the
/// next-day five-day BEIR change for that country, so the planted narrative
/// signal is recoverable by the full pipeline; 0 yields pure noise.
struct SynthConfig {
    std::uint64_t seed = 42;
    int days = 600;
    double signal_strength = 0.8; // in [0, 1]
    int records_per_day = 12;     // per country
    Date start = Date(17898);     // 2019-01-02
    std::vector<CountrySpec> countries = default_countries();
    int days_per_file = 150;
    // Deliberately malformed lines, spread across files, for skip accounting.
    int malformed_bad_tone = 0;
    int malformed_bad_date = 0;
    int malformed_bad_columns = 0;
};

struct SynthOutput {
    std::vector<std::filesystem::path> gkg_files;
    std::filesystem::path market_csv;
    std::uint64_t gkg_lines = 0;
};

// Same config and seed produce byte-identical files.
SynthOutput generate_synth_dataset(const std::filesystem::path& dir, const SynthConfig& config);

/// Large-file writer for parser throughput runs: emits GKG-format lines until
/// the file reaches at least `target_bytes`, with exactly `malformed` bad
/// lines interleaved deterministically. Returns total lines written.
std::uint64_t generate_bulk_gkg(const std::filesystem::path& path, std::uint64_t target_bytes,
                                std::uint64_t seed, std::uint64_t malformed);

} // namespace beircast
