#include "wardflow/cohort.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

namespace wardflow {
namespace {

LatLon centroid(const PolygonRing& polygon) {
  double lat = 0, lon = 0;
  for (const LatLon& v : polygon) {
    lat += v.lat;
    lon += v.lon;
  }
  const double n = static_cast<double>(polygon.size());
  return {lat / n, lon / n};
}

}  // namespace

std::string fiscal_label(int start_year) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d/%02d", start_year,
                (start_year + 1) % 100);
  return buf;
}

bool parse_fiscal_label(const std::string& text, int& start_year) {
  if (text.size() != 7 || text[4] != '/') return false;
  for (const std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
  }
  const int year = (text[0] - '0') * 1000 + (text[1] - '0') * 100 +
                   (text[2] - '0') * 10 + (text[3] - '0');
  const int short_year = (text[5] - '0') * 10 + (text[6] - '0');
  if (short_year != (year + 1) % 100) return false;
  start_year = year;
  return true;
}

int align_fiscal_year(const std::string& fy_label,
                      const std::vector<int>& snapshot_years, int lag_months) {
  int start_year = 0;
  if (!parse_fiscal_label(fy_label, start_year)) {
    throw InputError("malformed fiscal year label: " + fy_label);
  }
  if (lag_months < 0) throw InputError("lag_months must be nonnegative");
  // April (month 4) plus the lag, carried into whole years.
  const int target_year = start_year + (3 + lag_months) / 12;
  const auto it = std::find(snapshot_years.begin(), snapshot_years.end(),
                            target_year);
  if (it == snapshot_years.end()) {
    throw AnalysisError("fiscal year " + fy_label + " lands in " +
                        std::to_string(target_year) +
                        ", outside the configured snapshots");
  }
  return static_cast<int>(it - snapshot_years.begin()) + 1;
}

std::string fiscal_label_for_snapshot(int t,
                                      const std::vector<int>& snapshot_years,
                                      int lag_months) {
  if (t < 1 || static_cast<std::size_t>(t) > snapshot_years.size()) {
    throw InputError("snapshot index out of range: " + std::to_string(t));
  }
  if (lag_months < 0) throw InputError("lag_months must be nonnegative");
  return fiscal_label(snapshot_years[t - 1] - (3 + lag_months) / 12);
}

GroupLabel assign_group(double imd_2010, double city_avg_imd, double cea) {
  const bool deprived = imd_2010 > city_avg_imd;  // ties are less deprived
  const bool advantaged = cea > 1.0;              // strictly more than 1
  if (deprived) {
    return advantaged ? GroupLabel::G3 : GroupLabel::G2;
  }
  return advantaged ? GroupLabel::G1 : GroupLabel::G4;
}

std::map<std::string, double> ward_cea(const std::vector<AreaProfile>& profiles,
                                       const std::string& fiscal_year,
                                       std::vector<Diagnostic>* diagnostics) {
  std::vector<AreaProfile> wards, boroughs;
  for (const AreaProfile& p : profiles) {
    (p.level == AreaLevel::Ward ? wards : boroughs).push_back(p);
  }
  if (wards.empty()) {
    throw AnalysisError("no ward-level areas in the run");
  }

  const auto has_year = [&](const AreaProfile& p) {
    return p.ce_by_fy.count(fiscal_year) && p.te_by_fy.count(fiscal_year);
  };

  std::map<std::string, double> result;
  if (std::all_of(wards.begin(), wards.end(), has_year)) {
    for (const CulturalAdvantage& adv : compute_cea(wards, fiscal_year)) {
      result.emplace(adv.area_id, adv.cea);
    }
    return result;
  }

  // Expenditure lives at borough level: compute there, inherit by centroid.
  std::vector<AreaProfile> funded;
  for (const AreaProfile& b : boroughs) {
    if (has_year(b)) funded.push_back(b);
  }
  if (funded.empty()) {
    throw AnalysisError("no area carries expenditure for fiscal year " +
                        fiscal_year);
  }
  std::sort(funded.begin(), funded.end(),
            [](const AreaProfile& a, const AreaProfile& b) {
              return a.area_id < b.area_id;
            });
  std::map<std::string, double> borough_cea;
  for (const CulturalAdvantage& adv : compute_cea(funded, fiscal_year)) {
    borough_cea.emplace(adv.area_id, adv.cea);
  }

  for (const AreaProfile& w : wards) {
    if (w.polygon.empty()) {
      if (diagnostics) {
        diagnostics->push_back({"cohort", 0, "polygon",
                                "ward " + w.area_id +
                                    " has no polygon; cannot inherit CEA"});
      }
      continue;
    }
    const LatLon c = centroid(w.polygon);
    std::vector<const AreaProfile*> hits;
    for (const AreaProfile& b : funded) {
      if (!b.polygon.empty() && point_in_polygon(c, b.polygon)) {
        hits.push_back(&b);
      }
    }
    if (hits.empty()) {
      if (diagnostics) {
        diagnostics->push_back({"cohort", 0, "polygon",
                                "ward " + w.area_id +
                                    " lies in no funded borough; skipped"});
      }
      continue;
    }
    if (hits.size() > 1 && diagnostics) {
      diagnostics->push_back({"cohort", 0, "polygon",
                              "ward " + w.area_id + " centroid is in " +
                                  std::to_string(hits.size()) +
                                  " boroughs; keeping " +
                                  hits.front()->area_id});
    }
    result.emplace(w.area_id, borough_cea.at(hits.front()->area_id));
  }
  return result;
}

std::map<std::string, GroupLabel> assign_groups(
    const std::vector<AreaProfile>& profiles,
    const std::map<std::string, double>& cea_by_ward,
    std::vector<Diagnostic>* diagnostics) {
  std::vector<const AreaProfile*> wards;
  for (const AreaProfile& p : profiles) {
    if (p.level == AreaLevel::Ward) wards.push_back(&p);
  }
  if (wards.empty()) throw AnalysisError("no ward-level areas in the run");
  std::sort(wards.begin(), wards.end(),
            [](const AreaProfile* a, const AreaProfile* b) {
              return a->area_id < b->area_id;
            });

  double imd_sum = 0;
  for (const AreaProfile* w : wards) imd_sum += w->imd_2010;
  const double city_avg = imd_sum / static_cast<double>(wards.size());

  std::map<std::string, GroupLabel> groups;
  for (const AreaProfile* w : wards) {
    const auto cea = cea_by_ward.find(w->area_id);
    if (cea == cea_by_ward.end()) {
      if (diagnostics) {
        diagnostics->push_back({"cohort", 0, "cea",
                                "ward " + w->area_id +
                                    " has no CEA; no group assigned"});
      }
      continue;
    }
    groups.emplace(w->area_id,
                   assign_group(w->imd_2010, city_avg, cea->second));
  }
  return groups;
}

PanelBuild build_panel(const std::vector<AreaSnapshotMetrics>& metrics,
                       const std::map<std::string, GroupLabel>& groups) {
  std::set<int> all_times;
  std::map<std::string, std::map<int, const AreaSnapshotMetrics*>> by_area;
  for (const AreaSnapshotMetrics& m : metrics) {
    all_times.insert(m.t);
    if (!by_area[m.area_id].emplace(m.t, &m).second) {
      throw AnalysisError("duplicate metrics for area " + m.area_id +
                          " at t=" + std::to_string(m.t));
    }
  }

  PanelBuild out;
  for (const auto& [area_id, rows] : by_area) {
    const auto group = groups.find(area_id);
    if (group == groups.end()) {
      out.diagnostics.push_back({"panel", 0, "group",
                                 "area " + area_id +
                                     " has no group; excluded"});
      continue;
    }
    if (rows.size() != all_times.size()) {
      out.diagnostics.push_back(
          {"panel", 0, "t",
           "area " + area_id + " covers " + std::to_string(rows.size()) +
               " of " + std::to_string(all_times.size()) +
               " snapshots; excluded"});
      continue;
    }
    for (const auto& [t, m] : rows) {
      PanelObservation obs;
      obs.area_id = area_id;
      obs.group = group->second;
      obs.t = t;
      obs.node_number = m->node_number;
      obs.venue_created_number = m->venue_created_number;
      obs.venue_created_density = m->venue_created_density;
      obs.in_degree_centrality = m->in_degree_centrality;
      obs.out_degree_centrality = m->out_degree_centrality;
      obs.avg_clustering = m->avg_clustering;
      out.panel.push_back(std::move(obs));
    }
    ++out.group_sizes[group->second];
  }
  if (out.panel.empty()) {
    throw AnalysisError("panel is empty after balance filtering");
  }
  return out;
}

}  // namespace wardflow
