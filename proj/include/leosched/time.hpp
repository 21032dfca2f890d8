#pragma once

// UTC timestamps as std::chrono::sys_seconds with ISO-8601 parsing and
// formatting (no time zones beyond "Z" / "+00:00").

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

#include "leosched/core.hpp"

namespace leosched {

// Howard Hinnant's civil-date algorithms.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
  std::int64_t year;
  unsigned month, day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

inline TimePoint make_time(int year, unsigned month, unsigned day, int hour = 0, int minute = 0,
                           int second = 0) {
  const auto days = days_from_civil(year, month, day);
  return TimePoint{std::chrono::seconds{days * 86400 + hour * 3600 + minute * 60 + second}};
}

/// Accepts YYYY-MM-DDTHH:MM[:SS][Z|+00:00]; a space may replace 'T'.
inline TimePoint parse_iso8601(std::string_view text) {
  const std::string s(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, consumed = 0;
  char sep = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d%n", &y, &mo, &d, &sep, &h, &mi, &consumed) < 6 ||
      (sep != 'T' && sep != ' '))
    throw std::invalid_argument("bad ISO-8601 timestamp '" + s + "'");
  std::string_view rest = std::string_view(s).substr(static_cast<std::size_t>(consumed));
  if (!rest.empty() && rest.front() == ':') {
    int more = 0;
    if (std::sscanf(std::string(rest).c_str(), ":%2d%n", &sec, &more) < 1)
      throw std::invalid_argument("bad seconds in timestamp '" + s + "'");
    rest.remove_prefix(static_cast<std::size_t>(more));
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000"))
    throw std::invalid_argument("only UTC timestamps are supported: '" + s + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60)
    throw std::invalid_argument("timestamp field out of range in '" + s + "'");
  return make_time(y, static_cast<unsigned>(mo), static_cast<unsigned>(d), h, mi, sec);
}

inline std::string format_iso8601(TimePoint t) {
  const std::int64_t secs = t.time_since_epoch().count();
  std::int64_t days = secs / 86400;
  std::int64_t rem = secs % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const auto c = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(c.year), c.month, c.day, static_cast<long long>(rem / 3600),
                static_cast<long long>(rem % 3600 / 60), static_cast<long long>(rem % 60));
  return buf;
}

inline TimePoint floor_hour(TimePoint t) {
  return std::chrono::floor<std::chrono::hours>(t);
}

}  // namespace leosched
