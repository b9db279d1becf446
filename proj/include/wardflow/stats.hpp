#ifndef WARDFLOW_STATS_HPP
#define WARDFLOW_STATS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wardflow/panel.hpp"

namespace wardflow {

enum class Effect { Group, Time, GroupTime };

/// "group", "time", "group×time" — the strings used in anova_report.json.
const char* to_string(Effect effect);

struct AnovaRow {
  Effect effect = Effect::Group;
  double ss = 0.0;
  std::int64_t df1 = 0;
  std::int64_t df2 = 0;
  double f = 0.0;
  double p = 1.0;
  bool significant = false;
};

struct MeansCell {
  double mean = 0.0;
  double se = 0.0;       // sample sd / sqrt(n); 0 when n < 2
  double ci_half = 0.0;  // 1.96 * se
  std::size_t n = 0;
};

/// Per-(group, t) cell summaries in deterministic order: groups ascending,
/// then t ascending. Groups absent from the panel are omitted.
struct MeansTable {
  std::vector<GroupLabel> groups;
  std::vector<int> times;
  std::vector<std::vector<MeansCell>> cells;  // [group index][time index]
};

/// Deterministic extended-precision pairwise sum; identical result for a
/// given value order regardless of platform optimization or thread count.
double pairwise_sum(std::span<const double> values);

/// I_x(a, b), the regularized incomplete beta function, by Lentz's
/// continued-fraction method with the symmetry switch at x > (a+1)/(a+b+2).
/// Requires a > 0, b > 0, x in [0, 1]. Throws NumericError if the fraction
/// has not converged to 1e-14 within 200 iterations.
double regularized_incomplete_beta(double a, double b, double x);

/// P(F > f) for an F distribution with (df1, df2) degrees of freedom,
/// computed as I_x(df2/2, df1/2) at x = df2/(df2 + df1*f).
double f_tail(double f, std::int64_t df1, std::int64_t df2);

/// Independent one-way ANOVA over the given groups (each a sample of at
/// least two observations; at least two groups). Returns the group effect.
AnovaRow one_way_anova(const std::vector<std::vector<double>>& groups,
                       double alpha = 0.05);

/// Split-plot mixed ANOVA: between-subjects factor `group` crossed with a
/// within-subjects repeated factor (time). `values[i]` holds subject i's
/// series, all of equal length T. Returns {group, time, group×time} rows;
/// with T = 1 only the group row (which then equals the one-way ANOVA on
/// the same values).
std::vector<AnovaRow> mixed_anova(const std::vector<int>& group_of_subject,
                                  const std::vector<std::vector<double>>& values,
                                  double alpha = 0.05);

/// Panel front ends. The panel must be balanced (each area present for the
/// same set of t values); feature is one of kPanelFeatures.
std::vector<AnovaRow> mixed_anova(const std::vector<PanelObservation>& panel,
                                  const std::string& feature,
                                  double alpha = 0.05);

/// One-way ANOVA across groups on the per-area mean of the feature over all
/// snapshots.
AnovaRow one_way_anova(const std::vector<PanelObservation>& panel,
                       const std::string& feature, double alpha = 0.05);

/// One-way ANOVA per snapshot; returns (t, row) pairs in ascending t.
std::vector<std::pair<int, AnovaRow>> one_way_anova_by_snapshot(
    const std::vector<PanelObservation>& panel, const std::string& feature,
    double alpha = 0.05);

MeansTable group_means(const std::vector<PanelObservation>& panel,
                       const std::string& feature);

}  // namespace wardflow

#endif  // WARDFLOW_STATS_HPP
