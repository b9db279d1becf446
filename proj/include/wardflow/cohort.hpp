#ifndef WARDFLOW_COHORT_HPP
#define WARDFLOW_COHORT_HPP

#include <map>
#include <string>
#include <vector>

#include "wardflow/areas.hpp"
#include "wardflow/panel.hpp"
#include "wardflow/types.hpp"

namespace wardflow {

/// "2010/11" for the fiscal year starting April 2010.
std::string fiscal_label(int start_year);

/// Strict "YYYY/YY" with the short year equal to start_year+1 mod 100.
bool parse_fiscal_label(const std::string& text, int& start_year);

/// Snapshot index (1-based position in snapshot_years) reached by a fiscal
/// year's effect: FY starting April of Y, felt lag_months later. With the
/// default 9-month lag, FY Y lands in calendar year Y+1. Throws InputError
/// on a malformed label, AnalysisError when the target year is outside the
/// configured snapshots.
int align_fiscal_year(const std::string& fy_label,
                      const std::vector<int>& snapshot_years,
                      int lag_months = 9);

/// Inverse mapping: the fiscal label whose aligned snapshot is t.
std::string fiscal_label_for_snapshot(int t,
                                      const std::vector<int>& snapshot_years,
                                      int lag_months = 9);

/// Table-style group: deprivation strictly above the city average crossed
/// with CEA strictly above 1.
GroupLabel assign_group(double imd_2010, double city_avg_imd, double cea);

/// CEA per ward for one fiscal year. When every ward carries its own
/// expenditure the ratio set is the wards themselves; otherwise CEA is
/// computed at borough level and each ward inherits the value of the
/// borough containing its polygon centroid (CEA is a ratio, so it survives
/// any proportional apportionment). Wards that resolve to no borough are
/// skipped with a diagnostic.
std::map<std::string, double> ward_cea(const std::vector<AreaProfile>& profiles,
                                       const std::string& fiscal_year,
                                       std::vector<Diagnostic>* diagnostics);

/// Groups for every ward with a CEA value; the city average IMD is the
/// unweighted mean over all ward-level profiles in the run.
std::map<std::string, GroupLabel> assign_groups(
    const std::vector<AreaProfile>& profiles,
    const std::map<std::string, double>& cea_by_ward,
    std::vector<Diagnostic>* diagnostics);

struct PanelBuild {
  std::vector<PanelObservation> panel;  // sorted by (area_id, t)
  std::map<GroupLabel, std::size_t> group_sizes;
  std::vector<Diagnostic> diagnostics;
};

/// Balanced panel: an area is retained only with a metrics record for every
/// snapshot present in `metrics` and a group label; anything else is
/// excluded with a diagnostic. Throws AnalysisError when nothing survives.
PanelBuild build_panel(const std::vector<AreaSnapshotMetrics>& metrics,
                       const std::map<std::string, GroupLabel>& groups);

}  // namespace wardflow

#endif  // WARDFLOW_COHORT_HPP
