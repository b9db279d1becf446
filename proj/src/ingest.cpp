#include "wardflow/ingest.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "wardflow/areas.hpp"
#include "wardflow/cohort.hpp"
#include "wardflow/csv.hpp"

namespace wardflow {
namespace {

bool parse_double_strict(const std::string& text, double& out) {
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_int64_strict(const std::string& text, std::int64_t& out) {
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, out);
  return ec == std::errc() && ptr == last;
}

std::string join_fields(const std::vector<std::string>& fields) {
  std::string s;
  for (const std::string& f : fields) {
    if (!s.empty()) s += ",";
    s += f;
  }
  return s;
}

/// Reads and checks the header row. The optional column may be present or
/// not; anything else is a schema mismatch and poisons the whole file.
void read_header(CsvReader& reader, const char* source,
                 const std::vector<std::string>& required,
                 const std::string& optional_tail, bool& has_optional) {
  CsvRecord header;
  if (!reader.next(header)) {
    throw InputError(std::string(source) + ": empty input, header expected");
  }
  const std::vector<std::string>& got = header.fields;
  has_optional = !optional_tail.empty() &&
                 got.size() == required.size() + 1 &&
                 got.back() == optional_tail;
  const bool plain = got.size() == required.size();
  if (!plain && !has_optional) {
    throw InputError(std::string(source) + ": unexpected header \"" +
                     join_fields(got) + "\"");
  }
  for (std::size_t i = 0; i < required.size(); ++i) {
    if (got[i] != required[i]) {
      throw InputError(std::string(source) + ": unexpected header \"" +
                       join_fields(got) + "\"");
    }
  }
}

bool lat_lon_valid(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

int orientation_sign(const LatLon& a, const LatLon& b, const LatLon& c) {
  const double cross = (b.lon - a.lon) * (c.lat - a.lat) -
                       (b.lat - a.lat) * (c.lon - a.lon);
  if (cross > 0) return 1;
  if (cross < 0) return -1;
  return 0;
}

bool properly_crosses(const LatLon& p1, const LatLon& p2, const LatLon& q1,
                      const LatLon& q2) {
  const int o1 = orientation_sign(p1, p2, q1);
  const int o2 = orientation_sign(p1, p2, q2);
  const int o3 = orientation_sign(q1, q2, p1);
  const int o4 = orientation_sign(q1, q2, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

/// True when two non-adjacent ring edges properly cross. Touching at a
/// shared vertex is allowed; that keeps honestly drawn boundaries valid.
bool ring_self_intersects(const PolygonRing& ring) {
  const std::size_t n = ring.size();
  if (n < 4) return false;  // a triangle cannot properly self-cross
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // wrap-around neighbours
      if (properly_crosses(ring[i], ring[(i + 1) % n], ring[j],
                           ring[(j + 1) % n])) {
        return true;
      }
    }
  }
  return false;
}

struct ImdRow {
  AreaLevel level = AreaLevel::Ward;
  double imd_2010 = 0.0;
  double imd_2015 = 0.0;
};

std::map<std::string, ImdRow> parse_imd(std::istream& in,
                                        DiagnosticSink& diags) {
  CsvReader reader(in);
  bool unused = false;
  read_header(reader, "imd", {"area_id", "level", "imd_2010", "imd_2015"}, "",
              unused);
  std::map<std::string, ImdRow> rows;
  CsvRecord rec;
  while (reader.next(rec)) {
    const auto bad = [&](const std::string& field,
                         const std::string& message) {
      diags.add({"imd", rec.line, field, message});
    };
    if (rec.fields.size() != 4) {
      bad("", "expected 4 fields, got " + std::to_string(rec.fields.size()));
      continue;
    }
    const std::string& id = rec.fields[0];
    if (id.empty()) {
      bad("area_id", "empty area_id");
      continue;
    }
    ImdRow row;
    if (!parse_area_level(rec.fields[1], row.level)) {
      bad("level", "unknown area level \"" + rec.fields[1] + "\"");
      continue;
    }
    if (!parse_double_strict(rec.fields[2], row.imd_2010) ||
        row.imd_2010 < 0) {
      bad("imd_2010", "not a nonnegative number: \"" + rec.fields[2] + "\"");
      continue;
    }
    if (!parse_double_strict(rec.fields[3], row.imd_2015) ||
        row.imd_2015 < 0) {
      bad("imd_2015", "not a nonnegative number: \"" + rec.fields[3] + "\"");
      continue;
    }
    if (!rows.emplace(id, row).second) {
      bad("area_id", "duplicate area_id \"" + id + "\"");
    }
  }
  return rows;
}

using SpendTable = std::map<std::string, std::map<std::string, std::pair<double, double>>>;

SpendTable parse_expenditure(std::istream& in, DiagnosticSink& diags) {
  CsvReader reader(in);
  bool unused = false;
  read_header(reader, "expenditure",
              {"area_id", "fiscal_year", "cultural_expenditure",
               "total_expenditure"},
              "", unused);
  SpendTable rows;
  CsvRecord rec;
  while (reader.next(rec)) {
    const auto bad = [&](const std::string& field,
                         const std::string& message) {
      diags.add({"expenditure", rec.line, field, message});
    };
    if (rec.fields.size() != 4) {
      bad("", "expected 4 fields, got " + std::to_string(rec.fields.size()));
      continue;
    }
    const std::string& id = rec.fields[0];
    if (id.empty()) {
      bad("area_id", "empty area_id");
      continue;
    }
    int start_year = 0;
    if (!parse_fiscal_label(rec.fields[1], start_year)) {
      bad("fiscal_year", "not a YYYY/YY fiscal year: \"" + rec.fields[1] +
                             "\"");
      continue;
    }
    double ce = 0, te = 0;
    if (!parse_double_strict(rec.fields[2], ce) || ce < 0) {
      bad("cultural_expenditure",
          "not a nonnegative number: \"" + rec.fields[2] + "\"");
      continue;
    }
    if (!parse_double_strict(rec.fields[3], te) || te <= 0) {
      // CEA is undefined without positive total spending.
      bad("total_expenditure",
          "not a positive number: \"" + rec.fields[3] + "\"");
      continue;
    }
    if (ce > te) {
      bad("cultural_expenditure", "cultural spend exceeds total for " + id +
                                      " " + rec.fields[1]);
      continue;
    }
    if (!rows[id].emplace(rec.fields[1], std::make_pair(ce, te)).second) {
      bad("fiscal_year",
          "duplicate fiscal year " + rec.fields[1] + " for " + id);
    }
  }
  return rows;
}

std::map<std::string, PolygonRing> parse_polygons(std::istream& in,
                                                  DiagnosticSink& diags) {
  std::map<std::string, PolygonRing> rings;
  std::string line;
  std::size_t line_no = 0;

  std::string area_id;
  std::size_t block_line = 0;
  PolygonRing ring;
  bool block_bad = false;

  const auto flush = [&]() {
    if (area_id.empty()) return;
    const auto bad = [&](const std::string& message) {
      diags.add({"polygons", block_line, area_id, message});
    };
    if (!block_bad) {
      if (ring.size() < 3) {
        bad("polygon needs at least 3 vertices, got " +
            std::to_string(ring.size()));
      } else if (ring_self_intersects(ring)) {
        bad("polygon is self-intersecting");
      } else {
        try {
          polygon_area_km2(ring);  // rejects collinear/degenerate rings
          if (!rings.emplace(area_id, ring).second) {
            bad("duplicate polygon for \"" + area_id + "\"");
          }
        } catch (const InputError& e) {
          bad(e.what());
        }
      }
    }
    area_id.clear();
    ring.clear();
    block_bad = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (area_id.empty()) {
      area_id = line;
      block_line = line_no;
      continue;
    }
    if (block_bad) continue;
    std::istringstream vertex(line);
    std::string lat_text, lon_text, extra;
    vertex >> lat_text >> lon_text;
    LatLon v;
    if ((vertex >> extra) || !parse_double_strict(lat_text, v.lat) ||
        !parse_double_strict(lon_text, v.lon)) {
      diags.add({"polygons", line_no, area_id,
                 "not a \"lat lon\" vertex: \"" + line + "\""});
      block_bad = true;
      continue;
    }
    if (!lat_lon_valid(v.lat, v.lon)) {
      diags.add({"polygons", line_no, area_id,
                 "vertex out of lat/lon range: \"" + line + "\""});
      block_bad = true;
      continue;
    }
    ring.push_back(v);
  }
  flush();
  return rings;
}

}  // namespace

void DiagnosticSink::add(Diagnostic d) {
  entries_.push_back(std::move(d));
  if (entries_.size() > cap_) {
    throw InputError("more than " + std::to_string(cap_) +
                     " input problems; giving up. Last: " +
                     entries_.back().to_string());
  }
}

std::vector<Venue> parse_venues(std::istream& in, DiagnosticSink& diags) {
  CsvReader reader(in);
  bool has_area = false;
  read_header(reader, "venues",
              {"venue_id", "lat", "lon", "category", "created_at"}, "area_id",
              has_area);
  const std::size_t want = has_area ? 6 : 5;

  std::vector<Venue> venues;
  std::set<std::string> seen;
  CsvRecord rec;
  while (reader.next(rec)) {
    const auto bad = [&](const std::string& field,
                         const std::string& message) {
      diags.add({"venues", rec.line, field, message});
    };
    if (rec.fields.size() != want) {
      bad("", "expected " + std::to_string(want) + " fields, got " +
                  std::to_string(rec.fields.size()));
      continue;
    }
    Venue v;
    v.venue_id = rec.fields[0];
    if (v.venue_id.empty()) {
      bad("venue_id", "empty venue_id");
      continue;
    }
    if (!parse_double_strict(rec.fields[1], v.lat)) {
      bad("lat", "not a number: \"" + rec.fields[1] + "\"");
      continue;
    }
    if (!parse_double_strict(rec.fields[2], v.lon)) {
      bad("lon", "not a number: \"" + rec.fields[2] + "\"");
      continue;
    }
    if (!lat_lon_valid(v.lat, v.lon)) {
      bad("lat", "coordinates out of range: " + rec.fields[1] + "," +
                     rec.fields[2]);
      continue;
    }
    v.category = rec.fields[3];
    if (!parse_iso8601_utc(rec.fields[4], v.created_at)) {
      bad("created_at", "not an ISO-8601 UTC timestamp: \"" + rec.fields[4] +
                            "\"");
      continue;
    }
    if (has_area) v.area_id = rec.fields[5];
    if (!seen.insert(v.venue_id).second) {
      throw InputError("venues line " + std::to_string(rec.line) +
                       ": duplicate venue_id \"" + v.venue_id + "\"");
    }
    venues.push_back(std::move(v));
  }
  return venues;
}

std::vector<Transition> parse_transitions(
    std::istream& in, const std::set<std::string>& venue_index,
    DiagnosticSink& diags) {
  CsvReader reader(in);
  bool has_count = false;
  read_header(reader, "transitions", {"from_venue", "to_venue", "occurred_at"},
              "count", has_count);
  const std::size_t want = has_count ? 4 : 3;

  std::vector<Transition> transitions;
  CsvRecord rec;
  while (reader.next(rec)) {
    const auto bad = [&](const std::string& field,
                         const std::string& message) {
      diags.add({"transitions", rec.line, field, message});
    };
    if (rec.fields.size() != want) {
      bad("", "expected " + std::to_string(want) + " fields, got " +
                  std::to_string(rec.fields.size()));
      continue;
    }
    Transition t;
    t.from_venue = rec.fields[0];
    t.to_venue = rec.fields[1];
    if (!venue_index.count(t.from_venue)) {
      bad("from_venue", "unknown venue \"" + t.from_venue + "\"");
      continue;
    }
    if (!venue_index.count(t.to_venue)) {
      bad("to_venue", "unknown venue \"" + t.to_venue + "\"");
      continue;
    }
    if (t.from_venue == t.to_venue) {
      bad("to_venue", "self-loop on \"" + t.from_venue + "\"");
      continue;
    }
    if (!parse_iso8601_utc(rec.fields[2], t.occurred_at)) {
      bad("occurred_at", "not an ISO-8601 UTC timestamp: \"" + rec.fields[2] +
                             "\"");
      continue;
    }
    if (has_count) {
      if (!parse_int64_strict(rec.fields[3], t.count) || t.count < 1) {
        bad("count", "not a positive integer: \"" + rec.fields[3] + "\"");
        continue;
      }
    }
    transitions.push_back(std::move(t));
  }
  return transitions;
}

AreaTables parse_area_tables(std::istream& imd_source,
                             std::istream& expenditure_source,
                             std::istream& polygon_source,
                             DiagnosticSink& diags) {
  const std::map<std::string, ImdRow> imd = parse_imd(imd_source, diags);
  const SpendTable spend = parse_expenditure(expenditure_source, diags);
  const std::map<std::string, PolygonRing> polys =
      parse_polygons(polygon_source, diags);

  std::set<std::string> ids;
  for (const auto& [id, row] : imd) ids.insert(id);
  for (const auto& [id, fy] : spend) ids.insert(id);
  for (const auto& [id, ring] : polys) ids.insert(id);

  AreaTables out;
  for (const std::string& id : ids) {
    const auto imd_it = imd.find(id);
    const auto spend_it = spend.find(id);
    const auto poly_it = polys.find(id);
    if (imd_it == imd.end() || spend_it == spend.end() ||
        poly_it == polys.end()) {
      out.incomplete.push_back({id, imd_it == imd.end(),
                                spend_it == spend.end(),
                                poly_it == polys.end()});
      continue;
    }
    AreaProfile p;
    p.area_id = id;
    p.level = imd_it->second.level;
    p.imd_2010 = imd_it->second.imd_2010;
    p.imd_2015 = imd_it->second.imd_2015;
    for (const auto& [fy, ct] : spend_it->second) {
      p.ce_by_fy[fy] = ct.first;
      p.te_by_fy[fy] = ct.second;
    }
    p.polygon = poly_it->second;
    out.profiles.push_back(std::move(p));
  }
  return out;
}

void write_venues(std::ostream& out, const std::vector<Venue>& venues) {
  write_csv_row(out,
                {"venue_id", "lat", "lon", "category", "created_at",
                 "area_id"});
  for (const Venue& v : venues) {
    write_csv_row(out, {v.venue_id, format_double(v.lat),
                        format_double(v.lon), v.category,
                        format_iso8601_utc(v.created_at), v.area_id});
  }
}

void write_transitions(std::ostream& out,
                       const std::vector<Transition>& transitions) {
  write_csv_row(out, {"from_venue", "to_venue", "occurred_at", "count"});
  for (const Transition& t : transitions) {
    write_csv_row(out, {t.from_venue, t.to_venue,
                        format_iso8601_utc(t.occurred_at),
                        std::to_string(t.count)});
  }
}

void write_imd(std::ostream& out, const std::vector<AreaProfile>& profiles) {
  write_csv_row(out, {"area_id", "level", "imd_2010", "imd_2015"});
  for (const AreaProfile& p : profiles) {
    write_csv_row(out, {p.area_id, to_string(p.level),
                        format_double(p.imd_2010),
                        format_double(p.imd_2015)});
  }
}

void write_expenditure(std::ostream& out,
                       const std::vector<AreaProfile>& profiles) {
  write_csv_row(out, {"area_id", "fiscal_year", "cultural_expenditure",
                      "total_expenditure"});
  for (const AreaProfile& p : profiles) {
    for (const auto& [fy, ce] : p.ce_by_fy) {
      write_csv_row(out, {p.area_id, fy, format_double(ce),
                          format_double(p.te_by_fy.at(fy))});
    }
  }
}

void write_polygons(std::ostream& out,
                    const std::vector<AreaProfile>& profiles) {
  bool first = true;
  for (const AreaProfile& p : profiles) {
    if (!first) out << "\n";
    first = false;
    out << p.area_id << "\n";
    for (const LatLon& v : p.polygon) {
      out << format_double(v.lat) << " " << format_double(v.lon) << "\n";
    }
  }
}

Dataset load_dataset(const std::string& dir, std::size_t diagnostic_cap) {
  namespace fs = std::filesystem;
  const auto open = [&](const char* name) {
    const fs::path path = fs::path(dir) / name;
    std::ifstream in(path);
    if (!in) {
      throw InputError("cannot open " + path.string());
    }
    return in;
  };

  DiagnosticSink sink(diagnostic_cap);
  Dataset out;

  std::ifstream venues_in = open("venues.csv");
  out.venues = parse_venues(venues_in, sink);
  std::set<std::string> index;
  for (const Venue& v : out.venues) index.insert(v.venue_id);

  std::ifstream transitions_in = open("transitions.csv");
  out.transitions = parse_transitions(transitions_in, index, sink);

  std::ifstream imd_in = open("imd.csv");
  std::ifstream spend_in = open("expenditure.csv");
  std::ifstream poly_in = open("polygons.txt");
  AreaTables tables = parse_area_tables(imd_in, spend_in, poly_in, sink);
  out.profiles = std::move(tables.profiles);
  out.incomplete_areas = std::move(tables.incomplete);

  out.diagnostics = sink.entries();
  return out;
}

}  // namespace wardflow
