#include "beircast/synth.hpp"

#include "beircast/error.hpp"
#include "beircast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace beircast {

namespace {

const std::vector<std::string> kSignalThemes = {
    "ECON_INFLATION", "ECON_INTEREST_RATES", "ECON_CENTRALBANK", "ECON_BOND_MARKET",
    "ECON_COST_OF_LIVING", "WB_INFLATION_OUTLOOK", "WB_MONETARY_POLICY", "ECON_PRICECONTROL",
};

const std::vector<std::string> kNoiseEcofinThemes = {
    "ECON_TRADE_DISPUTE", "ECON_TAXATION", "ECON_STOCKMARKET", "ECON_CURRENCY_EXCHANGE",
    "ECON_BANKRUPTCY", "ECON_SUBSIDIES", "ECON_HOUSING_PRICES", "ECON_UNIONS",
    "WB_TRADE_POLICY", "WB_FISCAL_POLICY", "WB_LABOR_MARKETS", "WB_FINANCIAL_SECTOR",
};

const std::vector<std::string> kOtherRetainedThemes = {
    "HEALTH_PANDEMIC", "GOV_REFORM", "PROTEST", "ELECTION", "NATURAL_DISASTER_FLOOD",
    "TAX_DISEASE_INFLUENZA", "ENV_CLIMATECHANGE", "MILITARY_EXERCISE",
};

const std::vector<std::string> kDescriptiveThemes = {
    "TAX_FNCACT_PRESIDENT", "TAX_FNCACT_MINISTER", "TAX_ETHNICITY_GERMAN",
    "TAX_WORLDLANGUAGES_SPANISH", "TAX_ANIMAL_DOG", "TAX_POINTSOFINTEREST_AIRPORT",
};

std::string format_tone(double tone) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", tone);
    return std::string(buf);
}

std::string location_block(const CountrySpec& country) {
    return "1#" + country.name + "#" + country.fips + "#" + country.fips + "#30.5#-15.2#" +
           country.fips;
}

void sample_themes(Rng& rng, const std::vector<std::string>& pool, int count,
                   std::vector<std::string>& out) {
    for (int i = 0; i < count; ++i) {
        const auto& theme = pool[rng.uniform_index(pool.size())];
        if (std::find(out.begin(), out.end(), theme) == out.end()) out.push_back(theme);
    }
}

// One full 27-column GKG v2.1 line. `tone_text` is the first tone subfield
// verbatim, so malformed variants can be planted.
std::string gkg_line(const std::string& record_id, const std::string& timestamp,
                     const std::vector<std::string>& themes, const std::string& locations,
                     const std::string& tone_text, std::uint64_t article_number) {
    std::string v1_themes, v2_themes;
    int offset = 120;
    for (const auto& theme : themes) {
        if (!v1_themes.empty()) v1_themes += ';';
        v1_themes += theme;
        if (!v2_themes.empty()) v2_themes += ';';
        v2_themes += theme + ',' + std::to_string(offset);
        offset += 37;
    }
    const std::string tone_field = tone_text + ",2.1,1.4,3.5,22.4,0,418";
    std::string line;
    line.reserve(512);
    line += record_id;                                                     // 0
    line += '\t'; line += timestamp;                                       // 1
    line += '\t'; line += '2';                                             // 2
    line += '\t'; line += "synthnews.example.com";                         // 3
    line += '\t'; line += "https://synthnews.example.com/articles/";       // 4
    line += std::to_string(article_number);
    line += '\t';                                                          // 5 counts
    line += '\t';                                                          // 6 v2counts
    line += '\t'; line += v1_themes;                                       // 7
    line += '\t'; line += v2_themes;                                       // 8
    line += '\t'; line += locations;                                       // 9
    line += '\t'; line += locations;                                       // 10
    line += '\t';                                                          // 11 persons
    line += '\t';                                                          // 12 v2persons
    line += '\t';                                                          // 13 orgs
    line += '\t';                                                          // 14 v2orgs
    line += '\t'; line += tone_field;                                      // 15
    line += '\t';                                                          // 16 dates
    line += '\t'; line += "wc:418,c12.1:12,c12.10:9";                      // 17 gcam
    for (int i = 18; i < 27; ++i) line += '\t';                            // 18..26
    return line;
}

struct MarketPaths {
    // values[c] holds the BEIR path for countries[c]; shocks feed the tone.
    std::vector<std::vector<double>> beir;
    std::vector<MarketSeries> all_series;
};

MarketPaths simulate_market(const SynthConfig& config, const std::vector<Date>& calendar) {
    MarketPaths out;
    const int n = config.days;
    Rng market_rng(derive_seed(config.seed, "market"));

    // Global commodities; oil shocks leak into next-day BEIR innovations so
    // the market-only benchmark has genuine signal too.
    std::vector<double> gold(1, 1500.0), oil(1, 60.0), cmdty(1, 200.0);
    std::vector<double> oil_shocks(std::size_t(n), 0.0);
    for (int t = 1; t < n; ++t) {
        gold.push_back(gold.back() + 8.0 * market_rng.normal());
        const double shock = market_rng.normal();
        oil_shocks[std::size_t(t)] = shock;
        oil.push_back(std::max(5.0, oil.back() + 1.2 * shock));
        cmdty.push_back(cmdty.back() + 2.0 * market_rng.normal());
    }

    const auto make_series = [&](const std::string& name, const std::string& country,
                                 const std::vector<double>& values) {
        MarketSeries s;
        s.name = name;
        s.country = country;
        s.dates = calendar;
        s.values = values;
        return s;
    };
    out.all_series.push_back(make_series(kGoldSeries, "", gold));
    out.all_series.push_back(make_series(kOilSeries, "", oil));
    out.all_series.push_back(make_series(kCommoditySeries, "", cmdty));

    for (const auto& country : config.countries) {
        Rng rng(derive_seed(config.seed, "market-" + country.code));
        std::vector<double> beir(1, 1.8), stock(1, 1000.0), fx(1, 1.2), steep(1, 1.0);
        const double rho = 0.25; // lagged oil pass-through
        for (int t = 1; t < n; ++t) {
            const double lagged_oil = oil_shocks[std::size_t(t - 1)];
            const double z = std::sqrt(1.0 - rho * rho) * rng.normal() + rho * lagged_oil;
            beir.push_back(beir.back() + 0.02 * z);
            stock.push_back(std::max(50.0, stock.back() + 6.0 * rng.normal()));
            fx.push_back(std::max(0.05, fx.back() + 0.006 * rng.normal()));
            steep.push_back(steep.back() + 0.03 * rng.normal());
        }
        out.all_series.push_back(make_series(country.beir, country.code, beir));
        out.all_series.push_back(make_series(country.stock, country.code, stock));
        out.all_series.push_back(make_series(country.steepener, country.code, steep));
        if (country.fx) {
            out.all_series.push_back(make_series(*country.fx, country.code, fx));
        }
        out.beir.push_back(std::move(beir));
    }
    return out;
}

} // namespace

SynthOutput generate_synth_dataset(const std::filesystem::path& dir, const SynthConfig& config) {
    if (config.days < 30) throw UsageError("synth: need at least 30 days");
    if (config.signal_strength < 0.0 || config.signal_strength > 1.0) {
        throw UsageError("synth: signal strength must be in [0,1]");
    }
    std::filesystem::create_directories(dir);
    const std::vector<Date> calendar = weekday_calendar(config.start, config.days);
    const MarketPaths market = simulate_market(config, calendar);

    SynthOutput out;
    out.market_csv = dir / "market.csv";
    write_series_csv(out.market_csv, market.all_series);

    const double sigma5 = 0.02 * std::sqrt(5.0);
    const double tone_scale = 2.5;
    const int malformed_total =
        config.malformed_bad_tone + config.malformed_bad_date + config.malformed_bad_columns;
    std::uint64_t good_estimate = std::uint64_t(config.days) *
                                  std::uint64_t(config.countries.size()) *
                                  std::uint64_t(config.records_per_day);
    const std::uint64_t stride =
        malformed_total > 0 ? std::max<std::uint64_t>(good_estimate / std::uint64_t(malformed_total + 1), 1)
                            : 0;

    int bad_tone_left = config.malformed_bad_tone;
    int bad_date_left = config.malformed_bad_date;
    int bad_cols_left = config.malformed_bad_columns;
    std::uint64_t line_counter = 0;
    std::uint64_t article = 100000;

    std::ofstream file;
    int file_index = -1;
    const auto open_file_for_day = [&](int day) {
        const int wanted = day / config.days_per_file;
        if (wanted != file_index) {
            if (file.is_open()) file.close();
            char name[32];
            std::snprintf(name, sizeof(name), "gkg_%03d.tsv", wanted);
            out.gkg_files.push_back(dir / name);
            file.open(out.gkg_files.back(), std::ios::binary | std::ios::trunc);
            if (!file) throw DataError("synth: cannot write " + out.gkg_files.back().string());
            file_index = wanted;
        }
    };

    Rng record_rng(derive_seed(config.seed, "records"));
    for (int day = 0; day < config.days; ++day) {
        open_file_for_day(day);
        const std::string day_compact = [&] {
            const Date d = calendar[std::size_t(day)];
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%04d%02d%02d", d.year(), d.month(), d.day());
            return std::string(buf);
        }();
        for (std::size_t c = 0; c < config.countries.size(); ++c) {
            const auto& country = config.countries[c];
            const auto& beir = market.beir[c];
            // Tone target: the next-day five-day BEIR change, normalized.
            const int t_next = std::min(day + 1, config.days - 1);
            const int t_past = std::max(t_next - 5, 0);
            const double z5 = (beir[std::size_t(t_next)] - beir[std::size_t(t_past)]) / sigma5;
            const double signal_tone = tone_scale * z5;

            for (int r = 0; r < config.records_per_day; ++r) {
                ++line_counter;
                const std::string timestamp =
                    day_compact + (r % 2 == 0 ? "083000" : "143000");
                const std::string record_id = timestamp + "-" + country.code + "-" +
                                              std::to_string(r);
                const bool is_signal = r < (config.records_per_day * 7) / 12;

                std::vector<std::string> themes;
                if (is_signal) {
                    sample_themes(record_rng, kSignalThemes, 3 + int(record_rng.uniform_index(3)),
                                  themes);
                } else {
                    sample_themes(record_rng, kNoiseEcofinThemes,
                                  3 + int(record_rng.uniform_index(2)), themes);
                }
                sample_themes(record_rng, kOtherRetainedThemes,
                              1 + int(record_rng.uniform_index(2)), themes);
                sample_themes(record_rng, kDescriptiveThemes, int(record_rng.uniform_index(3)),
                              themes);

                double tone;
                if (is_signal) {
                    tone = config.signal_strength * signal_tone +
                           (1.0 - config.signal_strength) * 2.5 * record_rng.normal() +
                           0.4 * record_rng.normal();
                } else {
                    tone = 2.0 * record_rng.normal();
                }
                tone = std::clamp(tone, -9.99, 9.99);

                std::string locations = location_block(country);
                if (record_rng.uniform() < 0.15) {
                    // Off-roster second location; exercises multi-country parsing.
                    locations += ";1#France#FR#FR#46.0#2.0#FR";
                }

                // Deterministically interleave malformed lines.
                std::string line;
                if (stride > 0 && line_counter % stride == 0 &&
                    (bad_tone_left > 0 || bad_date_left > 0 || bad_cols_left > 0)) {
                    if (bad_tone_left > 0) {
                        line = gkg_line(record_id, timestamp, themes, locations, "NOTANUMBER",
                                        article++);
                        --bad_tone_left;
                    } else if (bad_date_left > 0) {
                        line = gkg_line(record_id, day_compact.substr(0, 4) + "1340083000",
                                        themes, locations, format_tone(tone), article++);
                        --bad_date_left;
                    } else {
                        line = gkg_line(record_id, timestamp, themes, locations,
                                        format_tone(tone), article++);
                        line = line.substr(0, line.find('\t', 40));
                        --bad_cols_left;
                    }
                } else {
                    line = gkg_line(record_id, timestamp, themes, locations, format_tone(tone),
                                    article++);
                }
                file << line << '\n';
            }
        }
    }
    file.close();
    out.gkg_lines = line_counter;

    if (bad_tone_left || bad_date_left || bad_cols_left) {
        throw UsageError("synth: malformed-line quota exceeds line budget");
    }
    return out;
}

std::uint64_t generate_bulk_gkg(const std::filesystem::path& path, std::uint64_t target_bytes,
                                std::uint64_t seed, std::uint64_t malformed) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw DataError("cannot write " + path.string());
    Rng rng(seed);
    const std::vector<CountrySpec> countries = default_countries();

    // Estimate lines from a sample line, then spread malformations evenly.
    std::uint64_t written = 0;
    std::uint64_t lines = 0;
    std::uint64_t malformed_left = malformed;
    const std::uint64_t approx_line = 700;
    const std::uint64_t approx_total = std::max<std::uint64_t>(target_bytes / approx_line, 1);
    const std::uint64_t stride =
        malformed > 0 ? std::max<std::uint64_t>(approx_total / (malformed + 1), 1) : 0;

    std::uint64_t article = 500000;
    while (written < target_bytes) {
        const auto& country = countries[rng.uniform_index(countries.size())];
        const int day_offset = int(rng.uniform_index(500));
        const Date d = Date(17898 + day_offset);
        char stamp[20];
        std::snprintf(stamp, sizeof(stamp), "%04d%02d%02d%02d%02d00", d.year(), d.month(), d.day(),
                      int(rng.uniform_index(24)), int(rng.uniform_index(60)));
        std::vector<std::string> themes;
        sample_themes(rng, kSignalThemes, 2 + int(rng.uniform_index(3)), themes);
        sample_themes(rng, kNoiseEcofinThemes, 1 + int(rng.uniform_index(3)), themes);
        sample_themes(rng, kOtherRetainedThemes, int(rng.uniform_index(3)), themes);
        sample_themes(rng, kDescriptiveThemes, int(rng.uniform_index(4)), themes);
        const double tone = std::clamp(2.5 * rng.normal(), -9.99, 9.99);

        ++lines;
        std::string tone_text = format_tone(tone);
        if (stride > 0 && malformed_left > 0 && lines % stride == 0) {
            tone_text = "NOTANUMBER";
            --malformed_left;
        }
        std::string line = gkg_line(std::string(stamp) + "-" + std::to_string(lines), stamp,
                                    themes, location_block(country), tone_text, article++);
        line += '\n';
        file << line;
        written += line.size();
    }
    if (malformed_left > 0) throw UsageError("bulk gkg: malformed quota not reachable");
    return lines;
}

} // namespace beircast
