#include "wwr/dates.hpp"
#include "wwr/errors.hpp"

#include <cstdio>

namespace wwr {

namespace {

// Howard Hinnant's civil-from-days / days-from-civil algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

} // namespace

Date::Date(int year, int month, int day) : serial_(days_from_civil(year, month, day)) {
    if (month < 1 || month > 12 || day < 1 || day > 31)
        throw DataError("invalid date components " + to_string());
}

Date Date::parse(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    if (std::sscanf(iso.c_str(), "%d%c%d%c%d", &y, &dash1, &m, &dash2, &d) != 5 ||
        dash1 != '-' || dash2 != '-' || m < 1 || m > 12 || d < 1 || d > 31)
        throw DataError("cannot parse date '" + iso + "', expected YYYY-MM-DD");
    return Date(y, m, d);
}

std::string Date::to_string() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

int Date::year() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return y;
}

int Date::month() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return m;
}

int Date::day() const {
    int y, m, d;
    civil_from_days(serial_, y, m, d);
    return d;
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday (weekday 3 with Monday = 0).
    return static_cast<int>(((serial_ % 7) + 7 + 3) % 7);
}

Date Date::plus_days(int n) const { return Date(serial_ + n); }

Date Date::next_business_day() const {
    Date d = plus_days(1);
    while (d.is_weekend()) d = d.plus_days(1);
    return d;
}

} // namespace wwr
