#include "echograph/timestamp.hpp"

#include "echograph/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace echograph {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y += m <= 2;
}

bool is_leap(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

int parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len) {
    if (pos + len > s.size()) throw ParseError("timestamp too short: '" + std::string(s) + "'");
    int value = 0;
    const auto* first = s.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len)
        throw ParseError("non-numeric timestamp component in '" + std::string(s) + "'");
    return value;
}

} // namespace

std::int64_t parse_iso8601(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM|+HHMM|-HHMM]
    if (s.size() < 19) throw ParseError("timestamp too short: '" + std::string(s) + "'");
    if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':')
        throw ParseError("malformed timestamp '" + std::string(s) + "'");
    const int year = parse_fixed_int(s, 0, 4);
    const int month = parse_fixed_int(s, 5, 2);
    const int day = parse_fixed_int(s, 8, 2);
    const int hour = parse_fixed_int(s, 11, 2);
    const int minute = parse_fixed_int(s, 14, 2);
    const int second = parse_fixed_int(s, 17, 2);
    if (month < 1 || month > 12)
        throw ParseError("month out of range in '" + std::string(s) + "'");
    if (day < 1 || day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))))
        throw ParseError("day out of range in '" + std::string(s) + "'");
    if (hour > 23 || minute > 59 || second > 60)
        throw ParseError("time of day out of range in '" + std::string(s) + "'");

    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) throw ParseError("empty fractional seconds in '" + std::string(s) + "'");
        // Fractional seconds are truncated; the model stores whole UTC seconds.
    }

    std::int64_t offset_seconds = 0;
    if (pos < s.size()) {
        const char c = s[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            const int sign = c == '+' ? 1 : -1;
            const int oh = parse_fixed_int(s, pos + 1, 2);
            std::size_t mpos = pos + 3;
            if (mpos < s.size() && s[mpos] == ':') ++mpos;
            const int om = parse_fixed_int(s, mpos, 2);
            if (oh > 23 || om > 59)
                throw ParseError("UTC offset out of range in '" + std::string(s) + "'");
            offset_seconds = sign * (oh * 3600 + om * 60);
            pos = mpos + 2;
        } else {
            throw ParseError("unexpected trailing characters in '" + std::string(s) + "'");
        }
    }
    if (pos != s.size())
        throw ParseError("unexpected trailing characters in '" + std::string(s) + "'");

    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                              static_cast<unsigned>(day));
    return days * 86400 + hour * 3600 + minute * 60 + second - offset_seconds;
}

std::string format_iso8601(std::int64_t unix_seconds) {
    std::int64_t days = unix_seconds / 86400;
    std::int64_t rem = unix_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
    return buf;
}

} // namespace echograph
