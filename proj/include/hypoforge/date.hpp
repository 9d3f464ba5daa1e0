#pragma once
// Calendar dates for publication records and temporal cutoffs, plus RFC 3339
// timestamps for the trace.

#include <chrono>
#include <compare>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>

#include "errors.hpp"
#include "text.hpp"

namespace hypoforge {

struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static bool leap(int y) {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    }

    static int days_in_month(int y, int m) {
        static const int d[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (m == 2 && leap(y)) return 29;
        return d[m - 1];
    }

    bool valid() const {
        return year >= 1 && month >= 1 && month <= 12 && day >= 1 &&
               day <= days_in_month(year, month);
    }

    // ISO form, used in configs and JSON.
    std::string iso() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    // Slash form required by the PubMed date parameters.
    std::string slashed() const {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d/%02d/%02d", year, month, day);
        return buf;
    }
};

// Accepts YYYY-MM-DD or YYYY/MM/DD.
inline Date parse_date(std::string_view s) {
    std::string t = trim(s);
    char sep = '-';
    if (t.find('/') != std::string::npos) sep = '/';
    auto parts = split(t, sep);
    if (parts.size() != 3) throw InputError("unparseable date: '" + t + "'");
    Date d;
    try {
        d.year = std::stoi(parts[0]);
        d.month = std::stoi(parts[1]);
        d.day = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw InputError("unparseable date: '" + t + "'");
    }
    if (!d.valid()) throw InputError("invalid calendar date: '" + t + "'");
    return d;
}

inline std::optional<Date> try_parse_date(std::string_view s) {
    try {
        return parse_date(s);
    } catch (const InputError&) {
        return std::nullopt;
    }
}

inline std::string rfc3339_utc(std::chrono::system_clock::time_point tp) {
    std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

inline std::string now_rfc3339() {
    return rfc3339_utc(std::chrono::system_clock::now());
}

}  // namespace hypoforge
