#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "wardflow/cohort.hpp"
#include "wardflow/ingest.hpp"
#include "wardflow/rng.hpp"

using namespace wardflow;

namespace {

std::vector<Venue> venues_from(const std::string& text,
                               DiagnosticSink& diags) {
  std::istringstream in(text);
  return parse_venues(in, diags);
}

std::vector<Transition> transitions_from(const std::string& text,
                                         const std::set<std::string>& index,
                                         DiagnosticSink& diags) {
  std::istringstream in(text);
  return parse_transitions(in, index, diags);
}

AreaTables tables_from(const std::string& imd, const std::string& spend,
                       const std::string& polys, DiagnosticSink& diags) {
  std::istringstream imd_in(imd), spend_in(spend), poly_in(polys);
  return parse_area_tables(imd_in, spend_in, poly_in, diags);
}

const char* kVenueHeader = "venue_id,lat,lon,category,created_at\n";

bool same_venue(const Venue& a, const Venue& b) {
  return a.venue_id == b.venue_id && a.lat == b.lat && a.lon == b.lon &&
         a.category == b.category && a.created_at == b.created_at &&
         a.area_id == b.area_id;
}

bool same_profile(const AreaProfile& a, const AreaProfile& b) {
  if (a.area_id != b.area_id || a.level != b.level ||
      a.imd_2010 != b.imd_2010 || a.imd_2015 != b.imd_2015 ||
      a.ce_by_fy != b.ce_by_fy || a.te_by_fy != b.te_by_fy ||
      a.polygon.size() != b.polygon.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.polygon.size(); ++i) {
    if (a.polygon[i].lat != b.polygon[i].lat ||
        a.polygon[i].lon != b.polygon[i].lon) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("a single valid venue row parses with every field") {
  DiagnosticSink diags;
  const auto venues = venues_from(
      std::string(kVenueHeader) +
          "v1,51.5,-0.12,Art Gallery,2011-03-04T12:30:00Z\n",
      diags);
  REQUIRE(venues.size() == 1);
  CHECK(diags.empty());
  CHECK(venues[0].venue_id == "v1");
  CHECK(venues[0].lat == doctest::Approx(51.5));
  CHECK(venues[0].lon == doctest::Approx(-0.12));
  CHECK(venues[0].category == "Art Gallery");
  CHECK(format_iso8601_utc(venues[0].created_at) == "2011-03-04T12:30:00Z");
  CHECK(venues[0].area_id.empty());
}

TEST_CASE("the optional area_id column is carried through when present") {
  DiagnosticSink diags;
  const auto venues = venues_from(
      "venue_id,lat,lon,category,created_at,area_id\n"
      "v1,51.5,-0.12,Cafe,2011-01-01,w7\n"
      "v2,51.6,-0.11,Cafe,2011-01-01,\n",
      diags);
  REQUIRE(venues.size() == 2);
  CHECK(venues[0].area_id == "w7");
  CHECK(venues[1].area_id.empty());
}

TEST_CASE("bad venue rows become positioned diagnostics, not venues") {
  DiagnosticSink diags;
  const auto venues = venues_from(
      std::string(kVenueHeader) +
          "v1,91,0,Cafe,2011-01-01\n"            // latitude out of range
          "v2,51.5,-200,Cafe,2011-01-01\n"       // longitude out of range
          "v3,abc,0,Cafe,2011-01-01\n"           // not a number
          "v4,51.5,-0.1,Cafe,yesterday\n"        // bad timestamp
          "v5,51.5,-0.1,Cafe\n"                  // missing field
          ",51.5,-0.1,Cafe,2011-01-01\n"         // empty id
          "v6,51.5,-0.1,Cafe,2011-01-01\n",      // fine
      diags);
  REQUIRE(venues.size() == 1);
  CHECK(venues[0].venue_id == "v6");
  // One diagnostic per rejected row: accepted + diagnostics = data rows.
  CHECK(diags.size() == 6);
  CHECK(diags.entries()[0].line == 2);
  CHECK(diags.entries()[3].field == "created_at");
  CHECK(diags.entries()[4].line == 6);
}

TEST_CASE("duplicate venue ids poison the dataset") {
  DiagnosticSink diags;
  CHECK_THROWS_AS(venues_from(std::string(kVenueHeader) +
                                  "v1,51.5,-0.1,Cafe,2011-01-01\n"
                                  "v1,51.6,-0.2,Bar,2011-01-02\n",
                              diags),
                  InputError);
}

TEST_CASE("venue files must start with the canonical header") {
  DiagnosticSink diags;
  CHECK_THROWS_AS(venues_from("", diags), InputError);
  CHECK_THROWS_AS(
      venues_from("id,lat,lon,category,created_at\nv1,0,0,Cafe,2011-01-01\n",
                  diags),
      InputError);
}

TEST_CASE("transitions parse, defaulting count and preserving order") {
  const std::set<std::string> index = {"a", "b", "c"};
  DiagnosticSink diags;
  const auto ts = transitions_from(
      "from_venue,to_venue,occurred_at\n"
      "b,c,2011-05-01T01:00:00\n"
      "a,b,2011-05-01T02:00:00\n",
      index, diags);
  REQUIRE(ts.size() == 2);
  CHECK(diags.empty());
  CHECK(ts[0].from_venue == "b");
  CHECK(ts[0].count == 1);
  CHECK(ts[1].from_venue == "a");
}

TEST_CASE("pre-aggregated transition rows carry their count") {
  const std::set<std::string> index = {"a", "b"};
  DiagnosticSink diags;
  const auto ts = transitions_from(
      "from_venue,to_venue,occurred_at,count\n"
      "a,b,2011-05-01,7\n",
      index, diags);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].count == 7);
}

TEST_CASE("self-loops, unknown venues and bad counts are rejected per row") {
  const std::set<std::string> index = {"a", "b"};
  DiagnosticSink diags;
  const auto ts = transitions_from(
      "from_venue,to_venue,occurred_at,count\n"
      "a,a,2011-05-01,1\n"   // self-loop
      "a,zz,2011-05-01,1\n"  // unknown destination
      "zz,b,2011-05-01,1\n"  // unknown source
      "a,b,2011-05-01,0\n"   // count below 1
      "a,b,2011-05-01,x\n"   // count not an integer
      "a,b,not-a-date,1\n"   // bad timestamp
      "a,b,2011-05-01,2\n",  // fine
      index, diags);
  REQUIRE(ts.size() == 1);
  CHECK(ts[0].count == 2);
  CHECK(diags.size() == 6);
  CHECK(diags.entries()[0].message.find("self-loop") != std::string::npos);
}

TEST_CASE("three consistent area sources join into three profiles") {
  DiagnosticSink diags;
  const AreaTables tables = tables_from(
      "area_id,level,imd_2010,imd_2015\n"
      "w1,ward,25.5,24.0\n"
      "w2,ward,12.0,13.5\n"
      "b1,borough,20.0,19.0\n",
      "area_id,fiscal_year,cultural_expenditure,total_expenditure\n"
      "w1,2010/11,5,100\n"
      "w1,2011/12,6,110\n"
      "w2,2010/11,1,80\n"
      "b1,2010/11,10,400\n",
      "w1\n0 0\n0 1\n1 1\n1 0\n\n"
      "w2\n0 1\n0 2\n1 2\n1 1\n\n"
      "b1\n0 0\n0 2\n1 2\n1 0\n",
      diags);
  CHECK(diags.empty());
  CHECK(tables.incomplete.empty());
  REQUIRE(tables.profiles.size() == 3);
  // Profiles come out sorted by area_id.
  CHECK(tables.profiles[0].area_id == "b1");
  CHECK(tables.profiles[0].level == AreaLevel::Borough);
  CHECK(tables.profiles[1].area_id == "w1");
  CHECK(tables.profiles[1].imd_2010 == doctest::Approx(25.5));
  CHECK(tables.profiles[1].ce_by_fy.size() == 2);
  CHECK(tables.profiles[1].te_by_fy.at("2011/12") == doctest::Approx(110));
  CHECK(tables.profiles[2].polygon.size() == 4);
}

TEST_CASE("areas missing a table produce no profile but a completeness entry") {
  DiagnosticSink diags;
  const AreaTables tables = tables_from(
      "area_id,level,imd_2010,imd_2015\n"
      "w1,ward,25.5,24.0\n"
      "w2,ward,12.0,13.5\n",
      "area_id,fiscal_year,cultural_expenditure,total_expenditure\n"
      "w1,2010/11,5,100\n"
      "w3,2010/11,2,90\n",
      "w1\n0 0\n0 1\n1 1\n1 0\n",
      diags);
  CHECK(diags.empty());
  REQUIRE(tables.profiles.size() == 1);
  CHECK(tables.profiles[0].area_id == "w1");
  REQUIRE(tables.incomplete.size() == 2);
  CHECK(tables.incomplete[0].area_id == "w2");
  CHECK_FALSE(tables.incomplete[0].imd);
  CHECK(tables.incomplete[0].expenditure);
  CHECK(tables.incomplete[0].polygon);
  CHECK(tables.incomplete[1].area_id == "w3");
  CHECK(tables.incomplete[1].imd);
  CHECK(tables.incomplete[1].polygon);
}

TEST_CASE("expenditure rows violating the spend invariants are rejected") {
  DiagnosticSink diags;
  const AreaTables tables = tables_from(
      "area_id,level,imd_2010,imd_2015\n"
      "w1,ward,25.5,24.0\n",
      "area_id,fiscal_year,cultural_expenditure,total_expenditure\n"
      "w1,2010/11,5,0\n"      // zero total: advantage undefined
      "w1,2011/12,-1,100\n"   // negative cultural spend
      "w1,2012/13,120,100\n"  // cultural exceeds total
      "w1,2013-14,5,100\n"    // malformed fiscal label
      "w1,2014/15,5,100\n"    // fine
      "w1,2014/15,6,100\n",   // duplicate year
      "w1\n0 0\n0 1\n1 1\n1 0\n",
      diags);
  CHECK(diags.size() == 5);
  REQUIRE(tables.profiles.size() == 1);
  CHECK(tables.profiles[0].ce_by_fy.size() == 1);
  CHECK(tables.profiles[0].ce_by_fy.count("2014/15") == 1);
}

TEST_CASE("imd rows with bad levels or negative scores are rejected") {
  DiagnosticSink diags;
  const AreaTables tables = tables_from(
      "area_id,level,imd_2010,imd_2015\n"
      "w1,district,25.5,24.0\n"  // unknown level
      "w2,ward,-3,24.0\n"        // negative score
      "w3,ward,25.5,24.0\n"
      "w3,ward,11.1,24.0\n",     // duplicate id
      "area_id,fiscal_year,cultural_expenditure,total_expenditure\n"
      "w3,2010/11,5,100\n",
      "w3\n0 0\n0 1\n1 1\n1 0\n",
      diags);
  CHECK(diags.size() == 3);
  REQUIRE(tables.profiles.size() == 1);
  CHECK(tables.profiles[0].imd_2010 == doctest::Approx(25.5));
}

TEST_CASE("degenerate and self-intersecting polygons are rejected") {
  DiagnosticSink diags;
  const AreaTables tables = tables_from(
      "area_id,level,imd_2010,imd_2015\n"
      "w1,ward,1,1\nw2,ward,1,1\nw3,ward,1,1\nw4,ward,1,1\nw5,ward,1,1\n",
      "area_id,fiscal_year,cultural_expenditure,total_expenditure\n"
      "w1,2010/11,5,100\nw2,2010/11,5,100\nw3,2010/11,5,100\n"
      "w4,2010/11,5,100\nw5,2010/11,5,100\n",
      "w1\n0 0\n0 1\n\n"                  // two vertices
      "w2\n0 0\n0 1\n0 2\n\n"             // collinear
      "w3\n0 0\n1 1\n1 0\n0 1\n\n"        // bowtie
      "w4\n0 0\n0 1\nnope\n1 0\n\n"       // unparseable vertex
      "w5\n0 0\n0 1\n1 1\n1 0\n",         // fine
      diags);
  CHECK(diags.size() == 4);
  REQUIRE(tables.profiles.size() == 1);
  CHECK(tables.profiles[0].area_id == "w5");
  REQUIRE(tables.incomplete.size() == 4);
  for (const MissingTables& m : tables.incomplete) {
    CHECK(m.polygon);
    CHECK_FALSE(m.imd);
    CHECK_FALSE(m.expenditure);
  }
}

TEST_CASE("polygon vertices must stay within coordinate range") {
  DiagnosticSink diags;
  const AreaTables tables = tables_from(
      "area_id,level,imd_2010,imd_2015\nw1,ward,1,1\n",
      "area_id,fiscal_year,cultural_expenditure,total_expenditure\n"
      "w1,2010/11,5,100\n",
      "w1\n95 0\n0 1\n1 1\n1 0\n",
      diags);
  CHECK(tables.profiles.empty());
  CHECK(diags.size() == 1);
  CHECK(diags.entries()[0].message.find("range") != std::string::npos);
}

TEST_CASE("the diagnostic cap turns a flood of bad rows into a hard error") {
  DiagnosticSink diags(3);
  std::string text(kVenueHeader);
  for (int i = 0; i < 5; ++i) {
    text += "v" + std::to_string(i) + ",abc,0,Cafe,2011-01-01\n";
  }
  CHECK_THROWS_AS(venues_from(text, diags), InputError);
  // The cap itself is inclusive: exactly 3 problems do not abort.
  DiagnosticSink relaxed(3);
  std::string three(kVenueHeader);
  for (int i = 0; i < 3; ++i) {
    three += "v" + std::to_string(i) + ",abc,0,Cafe,2011-01-01\n";
  }
  CHECK(venues_from(three, relaxed).empty());
  CHECK(relaxed.size() == 3);
}

TEST_CASE("parsing the same bytes twice gives identical results") {
  const std::string text = std::string(kVenueHeader) +
                           "v1,51.5,-0.12,Cafe,2011-03-04T12:30:00Z\n"
                           "v2,91,0,Cafe,2011-01-01\n"
                           "v3,51.6,0.1,Bar,2012-01-01\n";
  DiagnosticSink d1, d2;
  const auto a = venues_from(text, d1);
  const auto b = venues_from(text, d2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_venue(a[i], b[i]));
  }
  CHECK(d1.size() == d2.size());
}

TEST_CASE("randomized venue and transition round trips are lossless") {
  Rng rng(20210405);
  std::vector<Venue> venues;
  for (int i = 0; i < 200; ++i) {
    Venue v;
    v.venue_id = "venue-" + std::to_string(i);
    v.lat = rng.next_double() * 180.0 - 90.0;
    v.lon = rng.next_double() * 360.0 - 180.0;
    // Exercise quoting: commas, quotes and spaces in the category.
    const char* cats[] = {"Cafe", "Art, Gallery", "The \"Spot\"", "Bar "};
    v.category = cats[rng.next_int(0, 3)];
    v.created_at = rng.next_int(1293840000, 1420070400);  // 2011..2015
    if (rng.next_double() < 0.5) {
      v.area_id = "w" + std::to_string(rng.next_int(0, 30));
    }
    venues.push_back(v);
  }
  std::ostringstream out;
  write_venues(out, venues);
  DiagnosticSink diags;
  const auto reparsed = venues_from(out.str(), diags);
  CHECK(diags.empty());
  REQUIRE(reparsed.size() == venues.size());
  for (std::size_t i = 0; i < venues.size(); ++i) {
    CHECK(same_venue(venues[i], reparsed[i]));
  }

  std::set<std::string> index;
  for (const Venue& v : venues) index.insert(v.venue_id);
  std::vector<Transition> ts;
  for (int i = 0; i < 500; ++i) {
    Transition t;
    const int a = rng.next_int(0, 199);
    int b = rng.next_int(0, 198);
    if (b >= a) ++b;
    t.from_venue = "venue-" + std::to_string(a);
    t.to_venue = "venue-" + std::to_string(b);
    t.occurred_at = rng.next_int(1293840000, 1420070400);
    t.count = rng.next_int(1, 9);
    ts.push_back(t);
  }
  std::ostringstream tout;
  write_transitions(tout, ts);
  std::istringstream tin(tout.str());
  const auto treparsed = parse_transitions(tin, index, diags);
  CHECK(diags.empty());
  REQUIRE(treparsed.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(ts[i].from_venue == treparsed[i].from_venue);
    CHECK(ts[i].to_venue == treparsed[i].to_venue);
    CHECK(ts[i].occurred_at == treparsed[i].occurred_at);
    CHECK(ts[i].count == treparsed[i].count);
  }
}

TEST_CASE("randomized area-table round trips are lossless") {
  Rng rng(77);
  std::vector<AreaProfile> profiles;
  for (int i = 0; i < 40; ++i) {
    AreaProfile p;
    p.area_id = "w" + std::to_string(100 + i);  // zero-padded: sorted
    p.level = rng.next_double() < 0.2 ? AreaLevel::Borough : AreaLevel::Ward;
    p.imd_2010 = rng.next_double() * 60.0;
    p.imd_2015 = rng.next_double() * 60.0;
    for (int y = 2010; y < 2013; ++y) {
      const double te = 50.0 + rng.next_double() * 1000.0;
      p.te_by_fy[fiscal_label(y)] = te;
      p.ce_by_fy[fiscal_label(y)] = te * rng.next_double();
    }
    const double lat = rng.next_double() * 2.0;
    const double lon = rng.next_double() * 2.0;
    const double side = 0.01 + rng.next_double() * 0.05;
    p.polygon = {{lat, lon},
                 {lat, lon + side},
                 {lat + side, lon + side},
                 {lat + side, lon}};
    profiles.push_back(std::move(p));
  }
  std::ostringstream imd, spend, polys;
  write_imd(imd, profiles);
  write_expenditure(spend, profiles);
  write_polygons(polys, profiles);
  DiagnosticSink diags;
  const AreaTables tables =
      tables_from(imd.str(), spend.str(), polys.str(), diags);
  CHECK(diags.empty());
  CHECK(tables.incomplete.empty());
  REQUIRE(tables.profiles.size() == profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    CHECK(same_profile(profiles[i], tables.profiles[i]));
  }
}
