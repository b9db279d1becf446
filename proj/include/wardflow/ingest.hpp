#ifndef WARDFLOW_INGEST_HPP
#define WARDFLOW_INGEST_HPP

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "wardflow/types.hpp"

namespace wardflow {

inline constexpr std::size_t kDefaultDiagnosticCap = 1000;

/// Accumulates positioned problems across parsers. Parsing continues past
/// individual bad rows, but once more than `cap` diagnostics pile up the
/// input is considered hopeless and add() throws InputError.
class DiagnosticSink {
 public:
  explicit DiagnosticSink(std::size_t cap = kDefaultDiagnosticCap)
      : cap_(cap) {}

  void add(Diagnostic d);

  const std::vector<Diagnostic>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::size_t cap_;
  std::vector<Diagnostic> entries_;
};

/// venue_id,lat,lon,category,created_at[,area_id] with a mandatory header.
/// Every data row yields exactly one Venue or exactly one diagnostic; input
/// order is preserved. Duplicate venue ids poison the whole dataset and
/// throw InputError.
std::vector<Venue> parse_venues(std::istream& in, DiagnosticSink& diags);

/// from_venue,to_venue,occurred_at[,count]. Rows with unknown endpoints,
/// self-loops, or a count < 1 are rejected with one diagnostic each.
std::vector<Transition> parse_transitions(
    std::istream& in, const std::set<std::string>& venue_index,
    DiagnosticSink& diags);

/// One completeness entry per area that appears in some source but not all.
struct MissingTables {
  std::string area_id;
  bool imd = false;          // absent from imd.csv
  bool expenditure = false;  // absent from expenditure.csv
  bool polygon = false;      // absent from the polygons file
};

struct AreaTables {
  std::vector<AreaProfile> profiles;      // complete areas, sorted by id
  std::vector<MissingTables> incomplete;  // sorted by id
};

/// Joins imd.csv (area_id,level,imd_2010,imd_2015), expenditure.csv
/// (area_id,fiscal_year,cultural_expenditure,total_expenditure) and the
/// polygon file (area_id line, then one "lat lon" vertex per line, rings
/// separated by blank lines). Only areas present in all three sources
/// become profiles; the rest are reported.
AreaTables parse_area_tables(std::istream& imd_source,
                             std::istream& expenditure_source,
                             std::istream& polygon_source,
                             DiagnosticSink& diags);

// Canonical writers, inverse to the parsers above. Doubles are written as
// shortest round-tripping decimals so write -> parse is lossless.
void write_venues(std::ostream& out, const std::vector<Venue>& venues);
void write_transitions(std::ostream& out,
                       const std::vector<Transition>& transitions);
void write_imd(std::ostream& out, const std::vector<AreaProfile>& profiles);
void write_expenditure(std::ostream& out,
                       const std::vector<AreaProfile>& profiles);
void write_polygons(std::ostream& out,
                    const std::vector<AreaProfile>& profiles);

struct Dataset {
  std::vector<Venue> venues;
  std::vector<Transition> transitions;
  std::vector<AreaProfile> profiles;
  std::vector<MissingTables> incomplete_areas;
  std::vector<Diagnostic> diagnostics;
};

/// Reads venues.csv, transitions.csv, imd.csv, expenditure.csv and
/// polygons.txt from `dir`. A missing or unopenable file throws InputError.
Dataset load_dataset(const std::string& dir,
                     std::size_t diagnostic_cap = kDefaultDiagnosticCap);

}  // namespace wardflow

#endif  // WARDFLOW_INGEST_HPP
