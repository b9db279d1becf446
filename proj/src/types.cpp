#include "wardflow/types.hpp"

#include <cctype>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace wardflow {

const char* to_string(AreaLevel level) {
  return level == AreaLevel::Ward ? "ward" : "borough";
}

bool parse_area_level(const std::string& text, AreaLevel& out) {
  if (text == "ward") {
    out = AreaLevel::Ward;
    return true;
  }
  if (text == "borough") {
    out = AreaLevel::Borough;
    return true;
  }
  return false;
}

std::string Diagnostic::to_string() const {
  std::string s = source;
  if (line > 0) {
    s += ":" + std::to_string(line);
  }
  if (!field.empty()) {
    s += ": " + field;
  }
  s += ": " + message;
  return s;
}

std::int64_t days_from_civil(int year, int month, int day) {
  // Howard Hinnant's civil-days algorithm; exact over the full int range.
  year -= month <= 2;
  const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(year - era * 400);
  const unsigned doy =
      (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
      static_cast<unsigned>(day) - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::int64_t utc_timestamp(int year, int month, int day, int hour, int minute,
                           int second) {
  return days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 +
         second;
}

namespace {

bool read_digits(const std::string& s, std::size_t pos, std::size_t n,
                 int& out) {
  if (pos + n > s.size()) return false;
  int value = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = s[pos + i];
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

bool valid_date(int year, int month, int day) {
  if (month < 1 || month > 12 || day < 1) return false;
  static constexpr int lengths[] = {31, 28, 31, 30, 31, 30,
                                    31, 31, 30, 31, 30, 31};
  int max_day = lengths[month - 1];
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

}  // namespace

bool parse_iso8601_utc(const std::string& text, std::int64_t& out) {
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!read_digits(text, 0, 4, year)) return false;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return false;
  if (!read_digits(text, 5, 2, month) || !read_digits(text, 8, 2, day)) {
    return false;
  }
  if (!valid_date(year, month, day)) return false;
  std::size_t pos = 10;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') return false;
    ++pos;
    if (!read_digits(text, pos, 2, hour) || pos + 8 > text.size() ||
        text[pos + 2] != ':' || text[pos + 5] != ':' ||
        !read_digits(text, pos + 3, 2, minute) ||
        !read_digits(text, pos + 6, 2, second)) {
      return false;
    }
    if (hour > 23 || minute > 59 || second > 60) return false;
    if (second == 60) second = 59;  // leap second, truncated
    pos += 8;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t digits = 0;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
        ++digits;
      }
      if (digits == 0) return false;  // fraction truncated away
    }
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) return false;
  out = utc_timestamp(year, month, day, hour, minute, second);
  return true;
}

std::string format_iso8601_utc(std::int64_t ts) {
  std::int64_t days = ts / 86400;
  std::int64_t rem = ts % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  // Inverse of days_from_civil.
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : static_cast<unsigned>(-9));
  const std::int64_t year = y + (m <= 2);

  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

Interval calendar_year_window(int year) {
  return {utc_timestamp(year, 1, 1), utc_timestamp(year + 1, 1, 1)};
}

std::string format_double(double value) {
  // nlohmann emits the shortest representation that parses back exactly.
  return nlohmann::json(value).dump();
}

}  // namespace wardflow
