#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beircast {

/// Calendar day, stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}

    // Throws DataError if (y, m, d) is not a valid calendar day.
    static Date from_ymd(int year, int month, int day);

    // "YYYY-MM-DD". Returns nullopt on any malformation.
    static std::optional<Date> parse_iso(std::string_view s);
    // "YYYYMMDD" (first 8 chars of a GKG 14-digit timestamp are accepted).
    static std::optional<Date> parse_compact(std::string_view s);

    std::int32_t serial() const { return serial_; }
    int year() const;
    int month() const;
    int day() const;
    // Monday..Friday.
    bool is_weekday() const;

    std::string to_iso() const;

    Date operator+(int days) const { return Date(serial_ + days); }
    Date operator-(int days) const { return Date(serial_ - days); }
    int operator-(Date other) const { return serial_ - other.serial_; }
    auto operator<=>(const Date&) const = default;

private:
    std::int32_t serial_ = 0;
};

/// `count` consecutive weekdays starting at the first weekday >= start.
std::vector<Date> weekday_calendar(Date start, int count);

} // namespace beircast
