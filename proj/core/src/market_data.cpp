#include "beircast/market_data.hpp"

#include "beircast/csv.hpp"
#include "beircast/error.hpp"
#include "beircast/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace beircast {

std::optional<double> MarketSeries::value_on(Date d) const {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d) return std::nullopt;
    return values[std::size_t(it - dates.begin())];
}

std::vector<CountrySpec> default_countries() {
    auto spec = [](const char* code, const char* name, const char* fips,
                   bool has_fx) {
        CountrySpec c;
        c.code = code;
        c.name = name;
        c.fips = fips;
        c.beir = std::string(code) + "_BEIR10Y";
        c.stock = std::string(code) + "_STOCK";
        c.steepener = std::string(code) + "_STEEP";
        if (has_fx) c.fx = std::string(code) + "_FX";
        return c;
    };
    return {
        spec("US", "United States", "US", false), // numeraire: no FX series
        spec("UK", "United Kingdom", "UK", true),
        spec("DE", "Germany", "GM", true),
        spec("JP", "Japan", "JA", true),
        spec("ZA", "South Africa", "SF", true),
        spec("AU", "Australia", "AS", true),
        spec("BR", "Brazil", "BR", true),
        spec("MX", "Mexico", "MX", true),
    };
}

std::optional<CountrySpec> find_country(const std::vector<CountrySpec>& roster,
                                        const std::string& code) {
    for (const auto& c : roster) {
        if (c.code == code) return c;
    }
    return std::nullopt;
}

std::vector<MarketSeries> load_series(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t date_col = table.column("date");
    const std::size_t name_col = table.column("name");
    const std::size_t country_col = table.column("country");
    const std::size_t value_col = table.column("value");

    struct Row {
        Date date;
        double value;
    };
    std::map<std::string, std::pair<std::string, std::vector<Row>>> by_name;

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::string row_label = path.string() + " row " + std::to_string(i + 2);
        if (row.size() != table.header.size()) {
            throw DataError(row_label + ": wrong field count");
        }
        const auto date = Date::parse_iso(row[date_col]);
        if (!date) throw DataError(row_label + ": bad ISO date '" + row[date_col] + "'");
        double value = 0.0;
        const auto& vs = row[value_col];
        const auto [ptr, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), value);
        if (ec != std::errc{} || ptr != vs.data() + vs.size() || !std::isfinite(value)) {
            throw DataError(row_label + ": non-finite or malformed value '" + vs + "'");
        }
        auto& entry = by_name[row[name_col]];
        entry.first = row[country_col];
        entry.second.push_back(Row{*date, value});
    }

    std::vector<MarketSeries> out;
    out.reserve(by_name.size());
    for (auto& [name, entry] : by_name) {
        auto& rows = entry.second;
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.date < b.date; });
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].date == rows[i - 1].date) {
                throw DataError("duplicate (name,date) in " + path.string() + ": " + name +
                                " @ " + rows[i].date.to_iso());
            }
        }
        MarketSeries s;
        s.name = name;
        s.country = entry.first;
        s.dates.reserve(rows.size());
        s.values.reserve(rows.size());
        for (const auto& r : rows) {
            s.dates.push_back(r.date);
            s.values.push_back(r.value);
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_series_csv(const std::filesystem::path& path,
                      const std::vector<MarketSeries>& series) {
    std::string body = "date,name,country,value\n";
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.dates.size(); ++i) {
            body += csv::join_row({s.dates[i].to_iso(), s.name, s.country,
                                   format_double(s.values[i])});
            body += '\n';
        }
    }
    atomic_write_file(path, body);
}

AlignedMatrix align_calendar(const std::vector<MarketSeries>& series,
                             const std::vector<Date>& calendar,
                             const AlignOptions& options) {
    if (calendar.empty()) throw DataError("align_calendar: empty calendar");
    if (series.empty()) throw DataError("align_calendar: no series");
    const int n_dates = int(calendar.size());
    const int n_series = int(series.size());

    // For each series and calendar date: the value (possibly forward-filled),
    // the staleness in business days, or "missing" before the first obs /
    // beyond the fill limit.
    Eigen::MatrixXd values(n_dates, n_series);
    std::vector<std::vector<bool>> usable(std::size_t(n_series),
                                          std::vector<bool>(std::size_t(n_dates), false));
    AlignedMatrix out;
    out.fill_counts.assign(std::size_t(n_series), 0);

    for (int s = 0; s < n_series; ++s) {
        const auto& ms = series[s];
        if (ms.dates.empty()) throw DataError("align_calendar: series " + ms.name + " is empty");
        if (!ms.dates.empty() && ms.dates.back() < calendar.back()) {
            throw DataError("align_calendar: series " + ms.name + " ends " +
                            ms.dates.back().to_iso() + ", before calendar end " +
                            calendar.back().to_iso() + " (no trailing fill)");
        }
        bool any_overlap = false;
        int stale = 0;
        double last = 0.0;
        bool have_last = false;
        for (int d = 0; d < n_dates; ++d) {
            const auto obs = ms.value_on(calendar[d]);
            if (obs) {
                last = *obs;
                have_last = true;
                stale = 0;
                values(d, s) = last;
                usable[std::size_t(s)][std::size_t(d)] = true;
                any_overlap = true;
            } else if (have_last && stale < options.forward_fill_limit) {
                ++stale;
                values(d, s) = last;
                usable[std::size_t(s)][std::size_t(d)] = true;
                ++out.fill_counts[std::size_t(s)];
            } else {
                if (have_last) ++stale;
                values(d, s) = std::numeric_limits<double>::quiet_NaN();
            }
        }
        if (!any_overlap) {
            throw DataError("align_calendar: series " + ms.name + " has no overlap with calendar");
        }
    }

    // Keep only the dates where every series is usable.
    std::vector<int> keep;
    for (int d = 0; d < n_dates; ++d) {
        bool all = true;
        for (int s = 0; s < n_series; ++s) {
            if (!usable[std::size_t(s)][std::size_t(d)]) { all = false; break; }
        }
        if (all) keep.push_back(d);
    }
    if (keep.empty()) throw DataError("align_calendar: no common sample across series");

    out.dates.reserve(keep.size());
    out.values.resize(int(keep.size()), n_series);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.dates.push_back(calendar[std::size_t(keep[i])]);
        out.values.row(int(i)) = values.row(keep[i]);
    }
    out.names.reserve(series.size());
    for (const auto& s : series) out.names.push_back(s.name);
    return out;
}

} // namespace beircast
