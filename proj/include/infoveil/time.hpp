// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "infoveil/error.hpp"

namespace infoveil {

/// All instants are UTC with one-second resolution.
using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

namespace detail {

inline bool read_int(std::string_view s, std::size_t& pos, std::size_t digits, int& out) {
  if (pos + digits > s.size()) return false;
  auto first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + digits, out);
  if (ec != std::errc{} || ptr != first + digits) return false;
  pos += digits;
  return true;
}

inline bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

inline std::optional<Date> make_date(int y, int m, int d) {
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

// Parses "HH:MM[:SS]" plus an optional "Z" or "+hh:mm"/"-hh:mm" offset.
inline std::optional<std::chrono::seconds> parse_clock(std::string_view s, std::size_t& pos) {
  int hh = 0, mm = 0, ss = 0;
  if (!read_int(s, pos, 2, hh) || !expect(s, pos, ':') || !read_int(s, pos, 2, mm)) return std::nullopt;
  if (expect(s, pos, ':') && !read_int(s, pos, 2, ss)) return std::nullopt;
  if (expect(s, pos, '.')) {
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  std::chrono::seconds offset{0};
  if (expect(s, pos, 'Z')) {
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int sign = s[pos] == '-' ? -1 : 1;
    ++pos;
    int oh = 0, om = 0;
    if (!read_int(s, pos, 2, oh)) return std::nullopt;
    expect(s, pos, ':');
    if (!read_int(s, pos, 2, om)) return std::nullopt;
    offset = std::chrono::seconds{sign * (oh * 3600 + om * 60)};
  }
  return std::chrono::hours{hh} + std::chrono::minutes{mm} + std::chrono::seconds{ss} - offset;
}

}  // namespace detail

/// Accepts "YYYY-MM-DD", "YYYY-MM-DD[T ]HH:MM[:SS][Z|±hh:mm]" and the
/// day-first "DD-MM-YYYY[, HH:MM]" form used by forum pages. Dates without
/// a time become midnight UTC.
inline std::optional<Timestamp> try_parse_timestamp(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  std::size_t pos = 0;
  int y = 0, m = 0, d = 0;
  std::optional<Date> date;
  if (s.size() >= 10 && s[4] == '-') {
    if (!detail::read_int(s, pos, 4, y) || !detail::expect(s, pos, '-') || !detail::read_int(s, pos, 2, m) ||
        !detail::expect(s, pos, '-') || !detail::read_int(s, pos, 2, d))
      return std::nullopt;
  } else if (s.size() >= 10 && s[2] == '-') {
    if (!detail::read_int(s, pos, 2, d) || !detail::expect(s, pos, '-') || !detail::read_int(s, pos, 2, m) ||
        !detail::expect(s, pos, '-') || !detail::read_int(s, pos, 4, y))
      return std::nullopt;
  } else {
    return std::nullopt;
  }
  date = detail::make_date(y, m, d);
  if (!date) return std::nullopt;
  Timestamp ts{*date};
  if (pos == s.size()) return ts;
  detail::expect(s, pos, ',');
  if (!detail::expect(s, pos, 'T')) {
    if (!detail::expect(s, pos, ' ')) return std::nullopt;
  }
  auto clock = detail::parse_clock(s, pos);
  if (!clock || pos != s.size()) return std::nullopt;
  return ts + *clock;
}

inline Timestamp parse_timestamp(std::string_view s) {
  auto ts = try_parse_timestamp(s);
  if (!ts) throw Error(ErrorCode::validation, "unparseable timestamp '" + std::string(s) + "'");
  return *ts;
}

/// Strict "YYYY-MM-DD".
inline std::optional<Date> try_parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-') return std::nullopt;
  auto ts = try_parse_timestamp(s);
  if (!ts) return std::nullopt;
  return std::chrono::floor<std::chrono::days>(*ts);
}

inline std::string format_date(Date date) {
  std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

inline std::string format_timestamp(Timestamp ts) {
  auto day = std::chrono::floor<std::chrono::days>(ts);
  std::chrono::hh_mm_ss hms{ts - day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
  return format_date(day) + buf;
}

enum class Granularity { day, week, month };

constexpr std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::day: return "day";
    case Granularity::week: return "week";
    case Granularity::month: return "month";
  }
  return "month";
}

inline std::optional<Granularity> parse_granularity(std::string_view s) {
  if (s == "day") return Granularity::day;
  if (s == "week") return Granularity::week;
  if (s == "month") return Granularity::month;
  return std::nullopt;
}

/// A calendar-aligned UTC interval. Weeks start on Monday.
struct TimeBucket {
  Granularity granularity = Granularity::month;
  Date start{};

  auto operator<=>(const TimeBucket&) const = default;

  TimeBucket next() const {
    using namespace std::chrono;
    switch (granularity) {
      case Granularity::day: return {granularity, start + days{1}};
      case Granularity::week: return {granularity, start + days{7}};
      case Granularity::month: {
        year_month_day ymd{start};
        return {granularity, sys_days{ymd + months{1}}};
      }
    }
    return *this;
  }

  bool contains(Timestamp ts) const { return ts >= Timestamp{start} && ts < Timestamp{next().start}; }

  /// "2010-03" for months, the start date otherwise.
  std::string label() const {
    auto s = format_date(start);
    return granularity == Granularity::month ? s.substr(0, 7) : s;
  }
};

inline TimeBucket bucket_of(Timestamp ts, Granularity granularity) {
  using namespace std::chrono;
  auto day = floor<days>(ts);
  switch (granularity) {
    case Granularity::day: return {granularity, day};
    case Granularity::week: {
      weekday wd{day};
      auto since_monday = (wd - Monday).count();
      return {granularity, day - days{since_monday}};
    }
    case Granularity::month: {
      year_month_day ymd{day};
      return {granularity, sys_days{ymd.year() / ymd.month() / 1}};
    }
  }
  return {granularity, day};
}

}  // namespace infoveil
