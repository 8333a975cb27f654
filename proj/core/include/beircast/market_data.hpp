#pragma once

#include "beircast/date.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace beircast {

/// One market time series in levels on strictly increasing observation dates.
struct MarketSeries {
    std::string name;
    std::string country; // empty for global series (commodities)
    std::vector<Date> dates;
    std::vector<double> values;

    std::optional<double> value_on(Date d) const;
};

/// Per-country roster entry naming the series this country contributes.
struct CountrySpec {
    std::string code;       // run-config code (US, UK, DE, ...)
    std::string name;       // display name
    std::string fips;       // GKG location filter code (DE -> GM, JP -> JA, ...)
    std::string beir;       // 10y breakeven series name
    std::string stock;      // stock market index series name
    std::string steepener;  // yield-curve steepener series name
    std::optional<std::string> fx; // absent for the numeraire country (US)
};

// The paper's eight-country roster with default series names. US has no FX
// series, giving the 74-variable total (8x4 market + 7 FX is folded into the
// per-country slots + 3 commodities + 40 narrative components).
std::vector<CountrySpec> default_countries();
std::optional<CountrySpec> find_country(const std::vector<CountrySpec>& roster,
                                        const std::string& code);

inline constexpr const char* kGoldSeries = "GOLD";
inline constexpr const char* kOilSeries = "OIL";
inline constexpr const char* kCommoditySeries = "CMDTY";

// Loads a market CSV with header date,name,country,value (ISO dates). One
// MarketSeries per distinct name, rows sorted by date. Duplicate (name,date),
// bad dates and non-finite values are fatal with the offending row number.
std::vector<MarketSeries> load_series(const std::filesystem::path& path);

// Serializes series back to the same CSV contract (rows grouped by series).
void write_series_csv(const std::filesystem::path& path,
                      const std::vector<MarketSeries>& series);

/// Dense date-by-series matrix of levels on a shared business-day calendar.
struct AlignedMatrix {
    std::vector<Date> dates;
    std::vector<std::string> names;
    Eigen::MatrixXd values; // rows = dates, cols = names
    std::vector<int> fill_counts; // forward-fills applied per series
};

struct AlignOptions {
    int forward_fill_limit = 5; // business days; longer gaps drop the date
};

// Aligns series onto `calendar`. Leading gaps shrink the common sample;
// interior gaps are forward-filled up to the limit; a series that ends before
// the calendar does is fatal (no trailing extrapolation). Never invents
// dates: the output calendar is a subset of the input calendar.
AlignedMatrix align_calendar(const std::vector<MarketSeries>& series,
                             const std::vector<Date>& calendar,
                             const AlignOptions& options = {});

} // namespace beircast
