#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace wwr {

/// Calendar date with day-count helpers. Stored as a civil-day serial so
/// ordering and day arithmetic are integer operations.
class Date {
public:
    Date() : serial_(0) {}
    Date(int year, int month, int day);

    /// Parses "YYYY-MM-DD". Throws DataError on malformed input.
    static Date parse(const std::string& iso);

    std::string to_string() const;

    int year() const;
    int month() const;
    int day() const;

    /// 0 = Monday ... 6 = Sunday.
    int weekday() const;
    bool is_weekend() const { return weekday() >= 5; }

    Date plus_days(int n) const;
    /// Next weekday strictly after this date.
    Date next_business_day() const;

    /// Days from this to other (positive if other is later).
    int days_until(const Date& other) const { return static_cast<int>(other.serial_ - serial_); }

    /// ACT/365-fixed year fraction from this to other.
    double year_fraction_to(const Date& other) const { return days_until(other) / 365.0; }

    std::int64_t serial() const { return serial_; }

    auto operator<=>(const Date&) const = default;

private:
    explicit Date(std::int64_t serial) : serial_(serial) {}
    std::int64_t serial_; // days since 1970-01-01
};

} // namespace wwr
