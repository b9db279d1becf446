#include "wardflow/areas.hpp"

#include <algorithm>
#include <cmath>

#include "wardflow/stats.hpp"

namespace wardflow {
namespace {

constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::size_t distinct_vertex_count(const PolygonRing& polygon) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(polygon.size());
  for (const LatLon& v : polygon) pts.emplace_back(v.lat, v.lon);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts.size();
}

// Is p on the closed segment [a, b]?
bool on_segment(const LatLon& p, const LatLon& a, const LatLon& b) {
  const double cross = (b.lon - a.lon) * (p.lat - a.lat) -
                       (p.lon - a.lon) * (b.lat - a.lat);
  if (cross != 0.0) return false;
  return p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat) &&
         p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon);
}

}  // namespace

const char* to_string(DensityMode mode) {
  return mode == DensityMode::PerKm2 ? "per_km2" : "per_venue";
}

bool parse_density_mode(const std::string& text, DensityMode& out) {
  if (text == "per_km2") {
    out = DensityMode::PerKm2;
    return true;
  }
  if (text == "per_venue") {
    out = DensityMode::PerVenue;
    return true;
  }
  return false;
}

bool point_in_polygon(const LatLon& point, const PolygonRing& polygon) {
  if (distinct_vertex_count(polygon) < 3) {
    throw InputError("polygon needs at least 3 distinct vertices");
  }
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_segment(point, polygon[j], polygon[i])) return true;
  }
  bool inside = false;
  // x = lon, y = lat; horizontal ray toward +lon.
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LatLon& a = polygon[j];
    const LatLon& b = polygon[i];
    if ((b.lat > point.lat) != (a.lat > point.lat)) {
      const double x_cross =
          b.lon + (point.lat - b.lat) * (a.lon - b.lon) / (a.lat - b.lat);
      if (point.lon < x_cross) inside = !inside;
    }
  }
  return inside;
}

double polygon_area_km2(const PolygonRing& polygon) {
  if (distinct_vertex_count(polygon) < 3) {
    throw InputError("polygon needs at least 3 distinct vertices");
  }
  const std::size_t n = polygon.size();
  double lat_sum = 0.0;
  for (const LatLon& v : polygon) lat_sum += v.lat;
  const double lat0 = lat_sum / static_cast<double>(n);
  const double cos_lat0 = std::cos(lat0 * kDegToRad);

  // Equirectangular projection about the centroid latitude, then shoelace.
  auto x = [&](const LatLon& v) {
    return kEarthRadiusKm * cos_lat0 * v.lon * kDegToRad;
  };
  auto y = [&](const LatLon& v) { return kEarthRadiusKm * v.lat * kDegToRad; };
  double twice_area = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice_area += x(polygon[j]) * y(polygon[i]) - x(polygon[i]) * y(polygon[j]);
  }
  const double area = 0.5 * std::fabs(twice_area);
  if (area == 0.0) throw InputError("polygon has zero area");
  return area;
}

AreaAssignment resolve_areas(const std::vector<Venue>& venues,
                             const std::vector<AreaProfile>& profiles) {
  std::set<std::string> known_ids;
  for (const AreaProfile& p : profiles) known_ids.insert(p.area_id);

  // Geometry candidates: ward-level polygons, sorted by id; all levels only
  // if the run has no wards at all.
  std::vector<const AreaProfile*> rings;
  for (const AreaProfile& p : profiles) {
    if (p.level == AreaLevel::Ward && !p.polygon.empty()) rings.push_back(&p);
  }
  if (rings.empty()) {
    for (const AreaProfile& p : profiles) {
      if (!p.polygon.empty()) rings.push_back(&p);
    }
  }
  std::sort(rings.begin(), rings.end(),
            [](const AreaProfile* a, const AreaProfile* b) {
              return a->area_id < b->area_id;
            });

  AreaAssignment result;
  for (const Venue& venue : venues) {
    if (!venue.area_id.empty()) {
      if (known_ids.count(venue.area_id)) {
        result.area_of_venue.emplace(venue.venue_id, venue.area_id);
      } else {
        result.diagnostics.push_back({"resolve", 0, "area_id",
                                      "venue " + venue.venue_id +
                                          " names unknown area " +
                                          venue.area_id});
        result.unassigned.push_back(venue.venue_id);
      }
      continue;
    }
    std::vector<const AreaProfile*> hits;
    for (const AreaProfile* p : rings) {
      if (point_in_polygon({venue.lat, venue.lon}, p->polygon)) {
        hits.push_back(p);
      }
    }
    if (hits.empty()) {
      result.unassigned.push_back(venue.venue_id);
      result.diagnostics.push_back({"resolve", 0, "location",
                                    "venue " + venue.venue_id +
                                        " lies inside no area polygon"});
    } else {
      if (hits.size() > 1) {
        result.diagnostics.push_back(
            {"resolve", 0, "location",
             "venue " + venue.venue_id + " lies inside " +
                 std::to_string(hits.size()) + " polygons; keeping " +
                 hits.front()->area_id});
      }
      result.area_of_venue.emplace(venue.venue_id, hits.front()->area_id);
    }
  }
  return result;
}

std::map<std::string, FlowCentrality> area_flow_centralities(
    const SnapshotGraph& g, const std::map<std::string, std::string>& assignment,
    std::vector<Diagnostic>* diagnostics) {
  std::map<std::string, FlowCentrality> flows;
  for (const auto& [venue_id, area_id] : assignment) flows[area_id];

  // Area of each node, by node index; nodes without an assignment excluded.
  const std::size_t n = g.node_count();
  std::vector<const std::string*> area_of(n, nullptr);
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto it = assignment.find(g.node_ids()[v]);
    if (it == assignment.end()) {
      if (diagnostics) {
        diagnostics->push_back({"flows", 0, "venue_id",
                                "graph node " + g.node_ids()[v] +
                                    " has no area; excluded from flows"});
      }
      continue;
    }
    area_of[v] = &it->second;
  }

  for (std::uint32_t u = 0; u < n; ++u) {
    if (!area_of[u]) continue;
    for (const auto& [v, weight] : g.out_edges(u)) {
      if (!area_of[v] || *area_of[u] == *area_of[v]) continue;
      const double w = static_cast<double>(weight);
      flows[*area_of[u]].out += w;
      flows[*area_of[v]].in += w;
    }
  }
  return flows;
}

std::vector<AreaSnapshotMetrics> area_snapshot_metrics(
    const SnapshotGraph& g, const std::vector<Venue>& venues,
    const std::map<std::string, std::string>& assignment,
    const std::vector<AreaProfile>& profiles, int t, DensityMode density_mode,
    std::vector<Diagnostic>* diagnostics) {
  std::vector<const AreaProfile*> wards;
  for (const AreaProfile& p : profiles) {
    if (p.level == AreaLevel::Ward) wards.push_back(&p);
  }
  if (wards.empty()) {
    for (const AreaProfile& p : profiles) wards.push_back(&p);
  }
  std::sort(wards.begin(), wards.end(),
            [](const AreaProfile* a, const AreaProfile* b) {
              return a->area_id < b->area_id;
            });

  // Venue tallies per area: total located there, created in-window.
  std::map<std::string, std::pair<std::size_t, std::size_t>> venue_counts;
  for (const Venue& venue : venues) {
    const auto it = assignment.find(venue.venue_id);
    if (it == assignment.end()) continue;
    auto& [total, created] = venue_counts[it->second];
    ++total;
    if (g.window().contains(venue.created_at)) ++created;
  }

  // In-graph nodes per area, in node order (sorted ids) for fixed sums.
  std::map<std::string, std::vector<std::uint32_t>> nodes_of_area;
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    const auto it = assignment.find(g.node_ids()[v]);
    if (it != assignment.end()) nodes_of_area[it->second].push_back(v);
  }

  const auto flows = area_flow_centralities(g, assignment, diagnostics);

  std::vector<AreaSnapshotMetrics> records;
  records.reserve(wards.size());
  for (const AreaProfile* ward : wards) {
    AreaSnapshotMetrics m;
    m.area_id = ward->area_id;
    m.t = t;

    const auto counts = venue_counts.find(ward->area_id);
    const std::size_t total =
        counts == venue_counts.end() ? 0 : counts->second.first;
    const std::size_t created =
        counts == venue_counts.end() ? 0 : counts->second.second;
    m.venue_created_number = static_cast<double>(created);

    if (density_mode == DensityMode::PerKm2) {
      try {
        m.venue_created_density =
            static_cast<double>(created) / polygon_area_km2(ward->polygon);
      } catch (const InputError& e) {
        if (diagnostics) {
          diagnostics->push_back({"metrics", 0, "polygon",
                                  "area " + ward->area_id + " skipped: " +
                                      e.what()});
        }
        continue;
      }
    } else {
      m.venue_created_density =
          total == 0 ? 0.0
                     : static_cast<double>(created) / static_cast<double>(total);
    }

    const auto nodes = nodes_of_area.find(ward->area_id);
    if (nodes != nodes_of_area.end() && !nodes->second.empty()) {
      m.node_number = static_cast<double>(nodes->second.size());
      std::vector<double> locals;
      locals.reserve(nodes->second.size());
      for (const std::uint32_t v : nodes->second) {
        locals.push_back(g.local_clustering(v));
      }
      m.avg_clustering =
          pairwise_sum(locals) / static_cast<double>(locals.size());
    }

    const auto flow = flows.find(ward->area_id);
    if (flow != flows.end()) {
      m.in_degree_centrality = flow->second.in;
      m.out_degree_centrality = flow->second.out;
    }
    records.push_back(std::move(m));
  }
  return records;
}

std::vector<CulturalAdvantage> compute_cea(
    const std::vector<AreaProfile>& profiles, const std::string& fiscal_year) {
  if (profiles.empty()) throw AnalysisError("no areas for CEA");

  std::vector<const AreaProfile*> sorted;
  for (const AreaProfile& p : profiles) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const AreaProfile* a, const AreaProfile* b) {
              return a->area_id < b->area_id;
            });

  std::vector<double> ces, tes;
  for (const AreaProfile* p : sorted) {
    const auto ce = p->ce_by_fy.find(fiscal_year);
    const auto te = p->te_by_fy.find(fiscal_year);
    if (ce == p->ce_by_fy.end() || te == p->te_by_fy.end()) {
      throw AnalysisError("area " + p->area_id +
                          " has no expenditure for fiscal year " + fiscal_year);
    }
    if (te->second <= 0.0) {
      throw AnalysisError("area " + p->area_id +
                          " has zero total expenditure in " + fiscal_year);
    }
    ces.push_back(ce->second);
    tes.push_back(te->second);
  }
  const double ce_city = pairwise_sum(ces);
  const double te_city = pairwise_sum(tes);
  if (ce_city <= 0.0) {
    throw AnalysisError("city-wide cultural expenditure is zero in " +
                        fiscal_year + "; CEA undefined");
  }
  const double city_ratio = ce_city / te_city;

  std::vector<CulturalAdvantage> result;
  result.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    CulturalAdvantage adv;
    adv.area_id = sorted[i]->area_id;
    adv.cea = (ces[i] / tes[i]) / city_ratio;
    result.push_back(std::move(adv));
  }
  return result;
}

std::vector<CulturalAdvantage> compute_cva(
    const std::vector<Venue>& venues,
    const std::map<std::string, std::string>& assignment,
    const std::set<std::string>& cultural_categories) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // tv, cv
  for (const Venue& venue : venues) {
    const auto it = assignment.find(venue.venue_id);
    if (it == assignment.end()) continue;
    auto& [tv, cv] = counts[it->second];
    ++tv;
    if (cultural_categories.count(venue.category)) ++cv;
  }
  if (counts.empty()) throw AnalysisError("no assigned venues for CVA");

  std::size_t tv_city = 0, cv_city = 0;
  for (const auto& [area_id, c] : counts) {
    tv_city += c.first;
    cv_city += c.second;
  }
  if (cv_city == 0) {
    throw AnalysisError("no cultural venues anywhere; CVA undefined");
  }
  const double city_ratio =
      static_cast<double>(cv_city) / static_cast<double>(tv_city);

  std::vector<CulturalAdvantage> result;
  result.reserve(counts.size());
  for (const auto& [area_id, c] : counts) {
    CulturalAdvantage adv;
    adv.area_id = area_id;
    adv.cva = (static_cast<double>(c.second) / static_cast<double>(c.first)) /
              city_ratio;
    result.push_back(std::move(adv));
  }
  return result;
}

}  // namespace wardflow
