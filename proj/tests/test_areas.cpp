#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "wardflow/areas.hpp"
#include "wardflow/rng.hpp"
#include "wardflow/types.hpp"

using namespace wardflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

PolygonRing square(double lat, double lon, double side) {
  return {{lat, lon},
          {lat, lon + side},
          {lat + side, lon + side},
          {lat + side, lon}};
}

// Nonzero winding number; independent of the ray-casting implementation.
bool winding_inside(const LatLon& p, const PolygonRing& poly) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LatLon& a = poly[j];
    const LatLon& b = poly[i];
    const double is_left = (b.lon - a.lon) * (p.lat - a.lat) -
                           (p.lon - a.lon) * (b.lat - a.lat);
    if (a.lat <= p.lat) {
      if (b.lat > p.lat && is_left > 0) ++wn;
    } else {
      if (b.lat <= p.lat && is_left < 0) --wn;
    }
  }
  return wn != 0;
}

PolygonRing random_star(Rng& rng, double lat0, double lon0, double scale) {
  const int n = 4 + static_cast<int>(rng.next_int(0, 6));
  std::vector<double> angles(n);
  for (auto& a : angles) a = rng.next_double() * 2.0 * kPi;
  std::sort(angles.begin(), angles.end());
  PolygonRing ring;
  for (const double a : angles) {
    const double r = scale * (0.3 + 0.7 * rng.next_double());
    ring.push_back({lat0 + r * std::sin(a), lon0 + r * std::cos(a)});
  }
  return ring;
}

Venue venue(const std::string& id, double lat, double lon,
            const std::string& category = "Office",
            std::int64_t created_at = 0, const std::string& area_id = "") {
  Venue v;
  v.venue_id = id;
  v.lat = lat;
  v.lon = lon;
  v.category = category;
  v.created_at = created_at;
  v.area_id = area_id;
  return v;
}

AreaProfile ward(const std::string& id, PolygonRing polygon) {
  AreaProfile p;
  p.area_id = id;
  p.level = AreaLevel::Ward;
  p.polygon = std::move(polygon);
  return p;
}

Transition trans(const std::string& from, const std::string& to,
                 std::int64_t at, std::int64_t count = 1) {
  Transition t;
  t.from_venue = from;
  t.to_venue = to;
  t.occurred_at = at;
  t.count = count;
  return t;
}

}  // namespace

TEST_CASE("point in unit square") {
  const auto sq = square(0, 0, 1);
  CHECK(point_in_polygon({0.5, 0.5}, sq));
  CHECK_FALSE(point_in_polygon({2, 2}, sq));
  CHECK_FALSE(point_in_polygon({-0.1, 0.5}, sq));
}

TEST_CASE("boundary points count as inside") {
  const auto sq = square(0, 0, 1);
  CHECK(point_in_polygon({0, 0.5}, sq));    // edge
  CHECK(point_in_polygon({0.5, 0}, sq));    // edge
  CHECK(point_in_polygon({1, 1}, sq));      // corner
  CHECK(point_in_polygon({0, 0}, sq));      // corner
}

TEST_CASE("concave notch is outside") {
  // L-shape: big square minus its upper-right quadrant
  const PolygonRing l_shape = {{0, 0}, {0, 2}, {1, 2}, {1, 1}, {2, 1}, {2, 0}};
  const LatLon notch{1.5, 1.5};
  CHECK_FALSE(point_in_polygon(notch, l_shape));
  CHECK(point_in_polygon(notch, l_shape) == winding_inside(notch, l_shape));
  CHECK(point_in_polygon({0.5, 0.5}, l_shape));
  CHECK(point_in_polygon({1.5, 0.5}, l_shape));
}

TEST_CASE("degenerate polygons throw") {
  CHECK_THROWS_AS(point_in_polygon({0, 0}, PolygonRing{{0, 0}, {1, 1}}),
                  InputError);
  CHECK_THROWS_AS(
      point_in_polygon({0, 0}, PolygonRing{{0, 0}, {1, 1}, {1, 1}, {0, 0}}),
      InputError);
  CHECK_THROWS_AS(polygon_area_km2(PolygonRing{{0, 0}, {1, 1}, {1, 1}}),
                  InputError);
  // collinear: zero area
  CHECK_THROWS_AS(polygon_area_km2(PolygonRing{{0, 0}, {1, 1}, {2, 2}}),
                  InputError);
}

TEST_CASE("ray casting agrees with the winding-number oracle") {
  Rng rng(61, "pip-oracle");
  for (int poly_i = 0; poly_i < 100; ++poly_i) {
    const double lat0 = rng.next_normal(20, 10);
    const double lon0 = rng.next_normal(0, 30);
    const auto poly = random_star(rng, lat0, lon0, 0.5);
    for (int pt = 0; pt < 100; ++pt) {
      const LatLon p{lat0 + rng.next_normal(0, 0.5),
                     lon0 + rng.next_normal(0, 0.5)};
      CHECK(point_in_polygon(p, poly) == winding_inside(p, poly));
    }
  }
}

TEST_CASE("small square area at the equator") {
  const double km = polygon_area_km2(square(0, 0, 0.01));
  CHECK(std::fabs(km - 1.2364) < 0.0005);  // 0.01 deg of arc = 1.112 km
}

TEST_CASE("area shrinks with the cosine of latitude") {
  const double at_equator = polygon_area_km2(square(0, 0, 0.01));
  const double at_sixty = polygon_area_km2(square(60, 0, 0.01));
  const double expected_ratio = std::cos((60.005) * kPi / 180.0) /
                                std::cos((0.005) * kPi / 180.0);
  CHECK(at_sixty / at_equator == doctest::Approx(expected_ratio).epsilon(1e-9));
}

TEST_CASE("area is orientation- and translation-invariant") {
  auto sq = square(10, 20, 0.05);
  const double fwd = polygon_area_km2(sq);
  std::reverse(sq.begin(), sq.end());
  CHECK(polygon_area_km2(sq) == doctest::Approx(fwd).epsilon(1e-12));
  CHECK(polygon_area_km2(square(10, -170, 0.05)) ==
        doctest::Approx(fwd).epsilon(1e-9));
}

TEST_CASE("resolve: explicit area id beats geometry") {
  const std::vector<AreaProfile> profiles = {ward("W01", square(0, 0, 1)),
                                             ward("W02", square(0, 1, 1))};
  // coordinates inside W02, explicit id says W01
  const auto r =
      resolve_areas({venue("v1", 0.5, 1.5, "Office", 0, "W01")}, profiles);
  CHECK(r.area_of_venue.at("v1") == "W01");
  CHECK(r.diagnostics.empty());
}

TEST_CASE("resolve: sole containing polygon wins; outsiders reported") {
  const std::vector<AreaProfile> profiles = {ward("W01", square(0, 0, 1)),
                                             ward("W02", square(0, 1, 1))};
  const auto r = resolve_areas(
      {venue("in2", 0.5, 1.5), venue("nowhere", 5, 5)}, profiles);
  CHECK(r.area_of_venue.at("in2") == "W02");
  CHECK(r.area_of_venue.count("nowhere") == 0);
  REQUIRE(r.unassigned.size() == 1);
  CHECK(r.unassigned[0] == "nowhere");
  CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("resolve: overlap goes to first sorted id with a diagnostic") {
  const std::vector<AreaProfile> profiles = {ward("W09", square(0, 0, 1)),
                                             ward("W02", square(0.5, 0.5, 1))};
  const auto r = resolve_areas({venue("v", 0.75, 0.75)}, profiles);
  CHECK(r.area_of_venue.at("v") == "W02");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message.find("2 polygons") != std::string::npos);
}

TEST_CASE("resolve: unknown explicit id is diagnosed, not assigned") {
  const std::vector<AreaProfile> profiles = {ward("W01", square(0, 0, 1))};
  const auto r =
      resolve_areas({venue("v", 0.5, 0.5, "Office", 0, "NOPE")}, profiles);
  CHECK(r.area_of_venue.empty());
  CHECK(r.unassigned == std::vector<std::string>{"v"});
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message.find("unknown area") != std::string::npos);
}

TEST_CASE("resolve: borough rings are ignored while wards exist") {
  AreaProfile borough;
  borough.area_id = "B1";
  borough.level = AreaLevel::Borough;
  borough.polygon = square(0, 0, 10);
  const std::vector<AreaProfile> profiles = {borough, ward("W01", square(0, 0, 1))};
  const auto r = resolve_areas({venue("v", 0.5, 0.5)}, profiles);
  CHECK(r.area_of_venue.at("v") == "W01");
  CHECK(r.diagnostics.empty());  // no ambiguity against the borough ring
}

TEST_CASE("flows: all intra-area edges give zero centralities") {
  const Interval w = calendar_year_window(2011);
  const auto g = SnapshotGraph::build(
      {trans("a1", "a2", w.start + 1), trans("a2", "a1", w.start + 2)}, 1, w);
  const std::map<std::string, std::string> assignment = {{"a1", "W01"},
                                                         {"a2", "W01"}};
  const auto flows = area_flow_centralities(g, assignment);
  REQUIRE(flows.size() == 1);
  CHECK(flows.at("W01").in == 0.0);
  CHECK(flows.at("W01").out == 0.0);
}

TEST_CASE("flows: one cross edge of weight 5") {
  const Interval w = calendar_year_window(2011);
  const auto g = SnapshotGraph::build({trans("x", "y", w.start + 1, 5)}, 1, w);
  const std::map<std::string, std::string> assignment = {{"x", "WX"},
                                                         {"y", "WY"}};
  const auto flows = area_flow_centralities(g, assignment);
  CHECK(flows.at("WX").out == 5.0);
  CHECK(flows.at("WX").in == 0.0);
  CHECK(flows.at("WY").in == 5.0);
  CHECK(flows.at("WY").out == 0.0);
}

TEST_CASE("flows: unassigned nodes are excluded with diagnostics") {
  const Interval w = calendar_year_window(2011);
  const auto g = SnapshotGraph::build(
      {trans("known", "mystery", w.start + 1, 3)}, 1, w);
  const std::map<std::string, std::string> assignment = {{"known", "W01"}};
  std::vector<Diagnostic> diags;
  const auto flows = area_flow_centralities(g, assignment, &diags);
  CHECK(flows.at("W01").out == 0.0);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("mystery") != std::string::npos);
}

TEST_CASE("flows: conservation against a brute-force edge scan") {
  const Interval w = calendar_year_window(2011);
  Rng rng(67, "flows");
  std::vector<Transition> transitions;
  std::map<std::string, std::string> assignment;
  for (int i = 0; i < 30; ++i) {
    assignment["v" + std::to_string(10 + i)] =
        "W" + std::to_string(static_cast<int>(rng.next_int(1, 3)));
  }
  for (int e = 0; e < 200; ++e) {
    const auto a = rng.next_int(10, 39);
    const auto b = rng.next_int(10, 39);
    if (a == b) continue;
    transitions.push_back(trans("v" + std::to_string(a),
                                "v" + std::to_string(b), w.start + e,
                                rng.next_int(1, 4)));
  }
  const auto g = SnapshotGraph::build(transitions, 1, w);
  const auto flows = area_flow_centralities(g, assignment);

  // brute force over the aggregated edge set
  std::map<std::string, FlowCentrality> expect;
  for (const auto& [vid, aid] : assignment) expect[aid];
  double inter_total = 0;
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    for (const auto& [v, weight] : g.out_edges(u)) {
      const auto& au = assignment.at(g.node_ids()[u]);
      const auto& av = assignment.at(g.node_ids()[v]);
      if (au == av) continue;
      expect[au].out += static_cast<double>(weight);
      expect[av].in += static_cast<double>(weight);
      inter_total += static_cast<double>(weight);
    }
  }
  double in_sum = 0, out_sum = 0;
  for (const auto& [aid, f] : flows) {
    CHECK(f.in == expect.at(aid).in);
    CHECK(f.out == expect.at(aid).out);
    in_sum += f.in;
    out_sum += f.out;
  }
  CHECK(in_sum == inter_total);
  CHECK(out_sum == inter_total);
}

TEST_CASE("metrics: empty area yields the defined zero record") {
  const Interval w = calendar_year_window(2011);
  const auto g = SnapshotGraph::build({trans("a", "b", w.start + 1)}, 1, w);
  const std::vector<AreaProfile> profiles = {ward("W01", square(0, 0, 0.01)),
                                             ward("W02", square(0, 0.01, 0.01))};
  const std::map<std::string, std::string> assignment = {{"a", "W01"},
                                                         {"b", "W01"}};
  const auto records =
      area_snapshot_metrics(g, {venue("a", 0.005, 0.005), venue("b", 0.005, 0.008)},
                            assignment, profiles, 1);
  REQUIRE(records.size() == 2);
  CHECK(records[1].area_id == "W02");
  CHECK(records[1].node_number == 0.0);
  CHECK(records[1].avg_clustering == 0.0);
  CHECK(records[1].in_degree_centrality == 0.0);
  CHECK(records[1].venue_created_density == 0.0);
  CHECK(records[0].node_number == 2.0);
}

TEST_CASE("metrics: reciprocal triangle area is fully clustered") {
  const Interval w = calendar_year_window(2011);
  const auto g = SnapshotGraph::build(
      {trans("a", "b", w.start + 1), trans("b", "a", w.start + 2),
       trans("b", "c", w.start + 3), trans("c", "b", w.start + 4),
       trans("c", "a", w.start + 5), trans("a", "c", w.start + 6)},
      1, w);
  const std::vector<AreaProfile> profiles = {ward("W01", square(0, 0, 0.01))};
  const std::map<std::string, std::string> assignment = {
      {"a", "W01"}, {"b", "W01"}, {"c", "W01"}};
  const auto records = area_snapshot_metrics(
      g, {venue("a", 0, 0), venue("b", 0, 0), venue("c", 0, 0)}, assignment,
      profiles, 1);
  REQUIRE(records.size() == 1);
  CHECK(records[0].avg_clustering == 1.0);
  CHECK(records[0].node_number == 3.0);
}

TEST_CASE("metrics: created counts and both density modes") {
  const Interval w = calendar_year_window(2011);
  const auto g = SnapshotGraph::build({trans("a", "b", w.start + 1)}, 1, w);
  const std::vector<AreaProfile> profiles = {ward("W01", square(0, 0, 0.01))};
  const std::map<std::string, std::string> assignment = {
      {"a", "W01"}, {"b", "W01"}, {"old", "W01"}};
  const std::vector<Venue> venues = {
      venue("a", 0, 0, "Office", w.start + 100),
      venue("b", 0, 0, "Office", w.start + 200),
      venue("old", 0, 0, "Office", w.start - 5000)};  // created before window

  const auto per_km = area_snapshot_metrics(g, venues, assignment, profiles, 1,
                                            DensityMode::PerKm2);
  REQUIRE(per_km.size() == 1);
  CHECK(per_km[0].venue_created_number == 2.0);
  const double km2 = polygon_area_km2(profiles[0].polygon);
  CHECK(per_km[0].venue_created_density ==
        doctest::Approx(2.0 / km2).epsilon(1e-12));

  const auto per_venue = area_snapshot_metrics(g, venues, assignment, profiles,
                                               1, DensityMode::PerVenue);
  CHECK(per_venue[0].venue_created_density ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cea: direct substitutions") {
  AreaProfile a = ward("A", {});
  a.ce_by_fy["2010/11"] = 5;
  a.te_by_fy["2010/11"] = 100;  // ratio 0.05
  AreaProfile b = ward("B", {});
  b.ce_by_fy["2010/11"] = 10;
  b.te_by_fy["2010/11"] = 100;  // ratio 0.10
  const auto advs = compute_cea({a, b}, "2010/11");
  REQUIRE(advs.size() == 2);
  // city ratio = 15/200 = 0.075
  CHECK(advs[0].cea == doctest::Approx(0.05 / 0.075).epsilon(1e-12));
  CHECK(advs[1].cea == doctest::Approx(0.10 / 0.075).epsilon(1e-12));
}

TEST_CASE("cea: area matching the city ratio scores exactly 1") {
  std::vector<AreaProfile> profiles;
  for (int i = 0; i < 3; ++i) {
    AreaProfile p = ward("W" + std::to_string(i), {});
    p.ce_by_fy["2011/12"] = 7.0;
    p.te_by_fy["2011/12"] = 140.0;
    profiles.push_back(p);
  }
  for (const auto& adv : compute_cea(profiles, "2011/12")) {
    CHECK(adv.cea == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cea: weighted-mean identity and scale invariance") {
  Rng rng(71, "cea");
  std::vector<AreaProfile> profiles;
  for (int i = 0; i < 100; ++i) {
    AreaProfile p = ward("W" + std::to_string(100 + i), {});
    const double te = 50.0 + 200.0 * rng.next_double();
    p.te_by_fy["2010/11"] = te;
    p.ce_by_fy["2010/11"] = te * 0.2 * rng.next_double();
    profiles.push_back(p);
  }
  const auto advs = compute_cea(profiles, "2010/11");
  long double weighted = 0, total = 0;
  for (std::size_t i = 0; i < advs.size(); ++i) {
    weighted += profiles[i].te_by_fy["2010/11"] * advs[i].cea;
    total += profiles[i].te_by_fy["2010/11"];
  }
  CHECK(std::fabs(static_cast<double>(weighted - total)) <=
        1e-9 * static_cast<double>(total));

  auto scaled = profiles;
  for (auto& p : scaled) {
    p.ce_by_fy["2010/11"] *= 1000.0;
    p.te_by_fy["2010/11"] *= 1000.0;
  }
  const auto advs2 = compute_cea(scaled, "2010/11");
  for (std::size_t i = 0; i < advs.size(); ++i) {
    CHECK(advs2[i].cea == doctest::Approx(advs[i].cea).epsilon(1e-12));
  }
}

TEST_CASE("cea: error cases") {
  AreaProfile p = ward("A", {});
  p.ce_by_fy["2010/11"] = 0;
  p.te_by_fy["2010/11"] = 0;
  CHECK_THROWS_AS(compute_cea({p}, "2010/11"), AnalysisError);

  AreaProfile q = ward("B", {});
  q.ce_by_fy["2010/11"] = 0;
  q.te_by_fy["2010/11"] = 10;
  CHECK_THROWS_AS(compute_cea({q}, "2010/11"), AnalysisError);  // sum CE = 0
  CHECK_THROWS_AS(compute_cea({q}, "2099/00"), AnalysisError);  // missing year
}

TEST_CASE("cva: direct substitution and identity") {
  std::map<std::string, std::string> assignment;
  std::vector<Venue> venues;
  // area X: 5 cultural of 10; rest of city: 95 cultural of 990
  for (int i = 0; i < 10; ++i) {
    const std::string id = "x" + std::to_string(i);
    venues.push_back(venue(id, 0, 0, i < 5 ? "Museum" : "Office"));
    assignment[id] = "X";
  }
  for (int i = 0; i < 990; ++i) {
    const std::string id = "y" + std::to_string(i);
    venues.push_back(venue(id, 0, 0, i < 95 ? "Museum" : "Office"));
    assignment[id] = "Y";
  }
  const auto advs = compute_cva(venues, assignment, {"Museum"});
  REQUIRE(advs.size() == 2);
  // city share = 100/1000 = 0.1; X share = 0.5
  CHECK(advs[0].area_id == "X");
  CHECK(advs[0].cva == doctest::Approx(5.0).epsilon(1e-12));

  long double weighted = 0, total = 0;
  const std::vector<double> tvs = {10, 990};
  for (std::size_t i = 0; i < advs.size(); ++i) {
    weighted += tvs[i] * advs[i].cva;
    total += tvs[i];
  }
  CHECK(std::fabs(static_cast<double>(weighted - total)) <=
        1e-9 * static_cast<double>(total));
}

TEST_CASE("cva: city-share areas score 1; no cultural venues is an error") {
  std::map<std::string, std::string> assignment;
  std::vector<Venue> venues;
  for (int a = 0; a < 4; ++a) {
    for (int i = 0; i < 8; ++i) {
      const std::string id = "v" + std::to_string(a) + "_" + std::to_string(i);
      venues.push_back(venue(id, 0, 0, i < 2 ? "Gallery" : "Shop"));
      assignment[id] = "W" + std::to_string(a);
    }
  }
  for (const auto& adv : compute_cva(venues, assignment, {"Gallery"})) {
    CHECK(adv.cva == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(compute_cva(venues, assignment, {"Aquarium"}), AnalysisError);
}
