#ifndef WARDFLOW_TYPES_HPP
#define WARDFLOW_TYPES_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wardflow {

inline constexpr const char* kVersion = "0.1.0";

/// Bad or missing input data: unreadable files, malformed rows beyond the
/// diagnostic cap, invalid configuration. Maps to CLI exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The inputs parsed but the analysis cannot proceed (empty panel, undefined
/// city-wide ratios, degenerate designs). Maps to CLI exit code 1.
struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge. Never silently degraded to a
/// wrong value.
struct NumericError : AnalysisError {
  using AnalysisError::AnalysisError;
};

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

using PolygonRing = std::vector<LatLon>;

struct Venue {
  std::string venue_id;
  double lat = 0.0;
  double lon = 0.0;
  std::string category;
  std::int64_t created_at = 0;  // seconds since epoch, UTC
  std::string area_id;          // empty until resolved
};

struct Transition {
  std::string from_venue;
  std::string to_venue;
  std::int64_t occurred_at = 0;  // seconds since epoch, UTC
  std::int64_t count = 1;
};

enum class AreaLevel { Ward, Borough };

const char* to_string(AreaLevel level);
bool parse_area_level(const std::string& text, AreaLevel& out);

struct AreaProfile {
  std::string area_id;
  AreaLevel level = AreaLevel::Ward;
  double imd_2010 = 0.0;
  double imd_2015 = 0.0;
  std::map<std::string, double> ce_by_fy;  // fiscal-year label -> cultural spend
  std::map<std::string, double> te_by_fy;  // fiscal-year label -> total spend
  PolygonRing polygon;
};

/// One positioned problem found while reading or deriving data. Parsing keeps
/// going past these (up to a cap); nothing is dropped silently.
struct Diagnostic {
  std::string source;  // logical table name, e.g. "venues"
  std::size_t line = 0;  // 1-based record line; 0 when not row-scoped
  std::string field;
  std::string message;

  std::string to_string() const;
};

/// Half-open UTC interval [start, end) in epoch seconds.
struct Interval {
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const { return t >= start && t < end; }
};

// Calendar helpers (proleptic Gregorian, UTC only).
std::int64_t days_from_civil(int year, int month, int day);
std::int64_t utc_timestamp(int year, int month, int day, int hour = 0,
                           int minute = 0, int second = 0);
/// Accepts "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS" with optional fractional
/// seconds (truncated) and optional trailing "Z".
bool parse_iso8601_utc(const std::string& text, std::int64_t& out);
std::string format_iso8601_utc(std::int64_t ts);
/// [Jan 1 of `year`, Jan 1 of `year`+1)
Interval calendar_year_window(int year);

/// Shortest decimal text that round-trips the double. Used for every number
/// written to CSV/JSON so emitted bundles are byte-stable.
std::string format_double(double value);

}  // namespace wardflow

#endif  // WARDFLOW_TYPES_HPP
