#pragma once

#include "beircast/gkg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace beircast {

/// Validated run configuration. Loaded from a TOML-style file with sections
/// [run], [paths], [parameters], [classifiers], [gkg_schema], [synth];
/// unknown sections or keys are rejected. CLI flags override file values.
struct RunConfig {
    // [run]
    std::vector<std::string> countries = {"US", "UK", "DE", "JP", "ZA", "AU", "BR", "MX"};
    std::uint64_t seed = 42;
    int jobs = 1;

    // [paths]
    std::vector<std::string> gkg_files; // explicit files and/or directories to scan
    std::string market_csv = "data/market.csv";
    std::string taxonomy_rules; // empty = the file shipped next to the binary
    std::string out_dir = "out";

    // [parameters]
    int k = 5;
    int horizon = 1;
    int components = 5;
    double alpha = 0.05;
    int folds = 5;
    int min_ecofin_themes = 3;
    int forward_fill_limit = 5;
    bool drop_unmapped = false;

    // [classifiers]
    std::vector<std::string> classifier_kinds = {"LG", "SV", "RF", "XG", "MLP"};

    // [gkg_schema]
    GkgSchema schema;

    // [synth]
    int synth_days = 600;
    double synth_signal = 0.8;
    int synth_records_per_day = 12;
    std::string synth_dir = "data";

    static RunConfig load(const std::filesystem::path& path);
    void validate() const; // throws UsageError with the offending key

    // Canonical key=value rendering; hashed into the run manifest.
    std::string canonical_string() const;

    // Expands gkg_files entries: directories are scanned for *.tsv/*.csv/*.gz,
    // sorted by name.
    std::vector<std::filesystem::path> resolve_gkg_files() const;
};

} // namespace beircast
