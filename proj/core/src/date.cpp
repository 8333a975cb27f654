#include "beircast/date.hpp"

#include "beircast/error.hpp"

#include <charconv>
#include <chrono>

namespace beircast {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(std::int32_t serial) {
    return chr::year_month_day{chr::sys_days{chr::days{serial}}};
}

std::optional<int> parse_int(std::string_view s) {
    int value = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::optional<Date> make_checked(int y, int m, int d) {
    const chr::year_month_day ymd{chr::year{y}, chr::month{unsigned(m)}, chr::day{unsigned(d)}};
    if (!ymd.ok()) return std::nullopt;
    return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

} // namespace

Date Date::from_ymd(int year, int month, int day) {
    auto d = make_checked(year, month, day);
    if (!d) {
        throw DataError("invalid calendar day: " + std::to_string(year) + "-" +
                        std::to_string(month) + "-" + std::to_string(day));
    }
    return *d;
}

std::optional<Date> Date::parse_iso(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = parse_int(s.substr(0, 4));
    auto m = parse_int(s.substr(5, 2));
    auto d = parse_int(s.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    return make_checked(*y, *m, *d);
}

std::optional<Date> Date::parse_compact(std::string_view s) {
    if (s.size() < 8) return std::nullopt;
    for (int i = 0; i < 8; ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
    }
    auto y = parse_int(s.substr(0, 4));
    auto m = parse_int(s.substr(4, 2));
    auto d = parse_int(s.substr(6, 2));
    if (!y || !m || !d) return std::nullopt;
    return make_checked(*y, *m, *d);
}

int Date::year() const { return int(to_ymd(serial_).year()); }
int Date::month() const { return int(unsigned(to_ymd(serial_).month())); }
int Date::day() const { return int(unsigned(to_ymd(serial_).day())); }

bool Date::is_weekday() const {
    const chr::weekday wd{chr::sys_days{chr::days{serial_}}};
    return wd != chr::Saturday && wd != chr::Sunday;
}

std::string Date::to_iso() const {
    char buf[11];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year(), month(), day());
    return std::string(buf);
}

std::vector<Date> weekday_calendar(Date start, int count) {
    std::vector<Date> out;
    out.reserve(size_t(count));
    Date d = start;
    while (!d.is_weekday()) d = d + 1;
    while (int(out.size()) < count) {
        if (d.is_weekday()) out.push_back(d);
        d = d + 1;
    }
    return out;
}

} // namespace beircast
