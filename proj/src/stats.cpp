#include "wardflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "wardflow/types.hpp"

namespace wardflow {
namespace {

template <typename T>
long double pairwise(const T* data, std::size_t n) {
  if (n <= 32) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(data, half) + pairwise(data + half, n - half);
}

long double sum_ld(const std::vector<long double>& v) {
  return pairwise(v.data(), v.size());
}

long double mean_of(const std::vector<double>& v) {
  return pairwise(v.data(), v.size()) / static_cast<long double>(v.size());
}

// Continued fraction for I_x(a,b) by the modified Lentz method.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 200;
  constexpr double kEps = 1e-14;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete beta: continued fraction did not converge");
}

AnovaRow make_row(Effect effect, long double ss_effect, std::int64_t df1,
                  std::int64_t df2, long double ss_error, long double tol,
                  double alpha) {
  AnovaRow row;
  row.effect = effect;
  row.ss = static_cast<double>(ss_effect);
  row.df1 = df1;
  row.df2 = df2;
  if (ss_error <= tol) {
    // Degenerate error term: zero effect over zero error is no effect.
    if (ss_effect <= tol) {
      row.f = 0.0;
      row.p = 1.0;
    } else {
      row.f = std::numeric_limits<double>::infinity();
      row.p = 0.0;
    }
  } else {
    const long double ms_effect = ss_effect / static_cast<long double>(df1);
    const long double ms_error = ss_error / static_cast<long double>(df2);
    row.f = static_cast<double>(ms_effect / ms_error);
    row.p = f_tail(row.f, df1, df2);
  }
  row.significant = row.p < alpha;
  return row;
}

// Panel regrouped into a rectangular subject-by-time layout.
struct PanelLayout {
  std::vector<std::string> area_ids;       // sorted ascending
  std::vector<GroupLabel> subject_group;   // parallel to area_ids
  std::vector<int> times;                  // sorted distinct t
  std::vector<std::vector<double>> values; // [subject][time index]
};

PanelLayout layout_panel(const std::vector<PanelObservation>& panel,
                         const std::string& feature) {
  if (panel.empty()) throw AnalysisError("panel is empty");

  std::map<std::string, std::map<int, double>> by_area;
  std::map<std::string, GroupLabel> group_of;
  std::set<int> all_times;
  for (const PanelObservation& obs : panel) {
    auto& row = by_area[obs.area_id];
    if (!row.emplace(obs.t, panel_feature(obs, feature)).second) {
      throw AnalysisError("duplicate panel observation for area " +
                          obs.area_id + " at t=" + std::to_string(obs.t));
    }
    all_times.insert(obs.t);
    auto [it, inserted] = group_of.emplace(obs.area_id, obs.group);
    if (!inserted && it->second != obs.group) {
      throw AnalysisError("area " + obs.area_id +
                          " appears under two different groups");
    }
  }

  PanelLayout layout;
  layout.times.assign(all_times.begin(), all_times.end());
  for (const auto& [area_id, row] : by_area) {
    if (row.size() != layout.times.size()) {
      throw AnalysisError("panel is not balanced: area " + area_id + " has " +
                          std::to_string(row.size()) + " of " +
                          std::to_string(layout.times.size()) + " snapshots");
    }
    layout.area_ids.push_back(area_id);
    layout.subject_group.push_back(group_of.at(area_id));
    std::vector<double> series;
    series.reserve(row.size());
    for (const auto& [t, value] : row) series.push_back(value);
    layout.values.push_back(std::move(series));
  }
  return layout;
}

std::vector<std::vector<double>> group_samples(
    const std::vector<GroupLabel>& subject_group,
    const std::vector<double>& value_of_subject) {
  std::vector<std::vector<double>> groups;
  for (const GroupLabel g : kAllGroups) {
    std::vector<double> sample;
    for (std::size_t i = 0; i < subject_group.size(); ++i) {
      if (subject_group[i] == g) sample.push_back(value_of_subject[i]);
    }
    if (!sample.empty()) groups.push_back(std::move(sample));
  }
  return groups;
}

}  // namespace

const char* to_string(Effect effect) {
  switch (effect) {
    case Effect::Group: return "group";
    case Effect::Time: return "time";
    case Effect::GroupTime: return "group\xc3\x97time";  // group×time
  }
  return "?";
}

double pairwise_sum(std::span<const double> values) {
  return static_cast<double>(pairwise(values.data(), values.size()));
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InputError("incomplete beta: a and b must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InputError("incomplete beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_tail(double f, std::int64_t df1, std::int64_t df2) {
  if (df1 < 1 || df2 < 1) {
    throw InputError("f_tail: degrees of freedom must be at least 1");
  }
  if (std::isnan(f) || f < 0.0) {
    throw InputError("f_tail: f must be nonnegative");
  }
  if (std::isinf(f)) return 0.0;
  const double d1 = static_cast<double>(df1);
  const double d2 = static_cast<double>(df2);
  const double x = d2 / (d2 + d1 * f);
  const double p = regularized_incomplete_beta(0.5 * d2, 0.5 * d1, x);
  return std::min(1.0, std::max(0.0, p));
}

AnovaRow one_way_anova(const std::vector<std::vector<double>>& groups,
                       double alpha) {
  const std::size_t g = groups.size();
  if (g < 2) throw AnalysisError("one-way ANOVA requires at least two groups");
  std::size_t n_total = 0;
  for (const auto& sample : groups) {
    if (sample.size() < 2) {
      throw AnalysisError(
          "one-way ANOVA requires at least two observations per group");
    }
    n_total += sample.size();
  }
  if (n_total <= g) {
    throw AnalysisError("one-way ANOVA requires more observations than groups");
  }

  std::vector<double> all;
  all.reserve(n_total);
  for (const auto& sample : groups) {
    all.insert(all.end(), sample.begin(), sample.end());
  }
  const long double grand = mean_of(all);

  std::vector<long double> between_terms, within_terms;
  between_terms.reserve(g);
  within_terms.reserve(n_total);
  for (const auto& sample : groups) {
    const long double m = mean_of(sample);
    const long double d = m - grand;
    between_terms.push_back(static_cast<long double>(sample.size()) * d * d);
    for (const double y : sample) {
      const long double e = y - m;
      within_terms.push_back(e * e);
    }
  }
  const long double ssb = sum_ld(between_terms);
  const long double ssw = sum_ld(within_terms);
  const long double tol = 1e-12L * (ssb + ssw);
  return make_row(Effect::Group, ssb, static_cast<std::int64_t>(g) - 1,
                  static_cast<std::int64_t>(n_total - g), ssw, tol, alpha);
}

std::vector<AnovaRow> mixed_anova(const std::vector<int>& group_of_subject,
                                  const std::vector<std::vector<double>>& values,
                                  double alpha) {
  const std::size_t n = values.size();
  if (n == 0) throw AnalysisError("mixed ANOVA: no subjects");
  if (group_of_subject.size() != n) {
    throw AnalysisError("mixed ANOVA: group labels do not match subjects");
  }
  const std::size_t t_count = values[0].size();
  if (t_count == 0) throw AnalysisError("mixed ANOVA: empty series");
  for (const auto& series : values) {
    if (series.size() != t_count) {
      throw AnalysisError("mixed ANOVA: subjects have unequal series lengths");
    }
  }

  // Remap group ids onto 0..g-1 in ascending id order.
  std::set<int> distinct(group_of_subject.begin(), group_of_subject.end());
  const std::size_t g = distinct.size();
  if (g < 2) throw AnalysisError("mixed ANOVA requires at least two groups");
  if (n <= g) {
    throw AnalysisError("mixed ANOVA requires more subjects than groups");
  }
  std::map<int, std::size_t> index_of;
  for (const int id : distinct) index_of.emplace(id, index_of.size());
  std::vector<std::size_t> gi(n);
  std::vector<std::size_t> n_g(g, 0);
  for (std::size_t i = 0; i < n; ++i) {
    gi[i] = index_of.at(group_of_subject[i]);
    ++n_g[gi[i]];
  }

  // Cell, margin, and grand means, each a pairwise sum in a fixed order.
  const long double nt = static_cast<long double>(n) * t_count;
  std::vector<double> all;
  all.reserve(n * t_count);
  for (const auto& series : values) {
    all.insert(all.end(), series.begin(), series.end());
  }
  const long double grand = pairwise(all.data(), all.size()) / nt;

  std::vector<long double> subj_mean(n);
  for (std::size_t i = 0; i < n; ++i) subj_mean[i] = mean_of(values[i]);

  std::vector<long double> group_mean(g);
  std::vector<std::vector<long double>> cell_mean(
      g, std::vector<long double>(t_count));
  {
    std::vector<double> pool;
    for (std::size_t k = 0; k < g; ++k) {
      pool.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (gi[i] == k) {
          pool.insert(pool.end(), values[i].begin(), values[i].end());
        }
      }
      group_mean[k] = pairwise(pool.data(), pool.size()) /
                      static_cast<long double>(pool.size());
      for (std::size_t t = 0; t < t_count; ++t) {
        std::vector<double> col;
        col.reserve(n_g[k]);
        for (std::size_t i = 0; i < n; ++i) {
          if (gi[i] == k) col.push_back(values[i][t]);
        }
        cell_mean[k][t] = pairwise(col.data(), col.size()) /
                          static_cast<long double>(col.size());
      }
    }
  }

  std::vector<long double> time_mean(t_count);
  {
    std::vector<double> col(n);
    for (std::size_t t = 0; t < t_count; ++t) {
      for (std::size_t i = 0; i < n; ++i) col[i] = values[i][t];
      time_mean[t] = pairwise(col.data(), col.size()) /
                     static_cast<long double>(n);
    }
  }

  // Split-plot partition, every term a square so no SS can go negative.
  std::vector<long double> terms;
  terms.reserve(n * t_count);
  for (std::size_t k = 0; k < g; ++k) {
    const long double d = group_mean[k] - grand;
    terms.push_back(static_cast<long double>(t_count) * n_g[k] * d * d);
  }
  const long double ss_group = sum_ld(terms);

  terms.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const long double d = subj_mean[i] - group_mean[gi[i]];
    terms.push_back(static_cast<long double>(t_count) * d * d);
  }
  const long double ss_subj = sum_ld(terms);

  terms.clear();
  for (std::size_t t = 0; t < t_count; ++t) {
    const long double d = time_mean[t] - grand;
    terms.push_back(static_cast<long double>(n) * d * d);
  }
  const long double ss_time = sum_ld(terms);

  terms.clear();
  for (std::size_t k = 0; k < g; ++k) {
    for (std::size_t t = 0; t < t_count; ++t) {
      const long double d = cell_mean[k][t] - group_mean[k] - time_mean[t] + grand;
      terms.push_back(static_cast<long double>(n_g[k]) * d * d);
    }
  }
  const long double ss_inter = sum_ld(terms);

  terms.clear();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < t_count; ++t) {
      const long double d =
          values[i][t] - subj_mean[i] - cell_mean[gi[i]][t] + group_mean[gi[i]];
      terms.push_back(d * d);
    }
  }
  const long double ss_err = sum_ld(terms);

  terms.clear();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < t_count; ++t) {
      const long double d = values[i][t] - grand;
      terms.push_back(d * d);
    }
  }
  const long double ss_total = sum_ld(terms);
  const long double tol = 1e-12L * ss_total;

  const auto df_g1 = static_cast<std::int64_t>(g) - 1;
  const auto df_g2 = static_cast<std::int64_t>(n - g);
  std::vector<AnovaRow> rows;
  rows.push_back(
      make_row(Effect::Group, ss_group, df_g1, df_g2, ss_subj, tol, alpha));
  if (t_count >= 2) {
    const auto df_t1 = static_cast<std::int64_t>(t_count) - 1;
    const auto df_w2 = df_g2 * df_t1;
    rows.push_back(
        make_row(Effect::Time, ss_time, df_t1, df_w2, ss_err, tol, alpha));
    rows.push_back(make_row(Effect::GroupTime, ss_inter, df_g1 * df_t1, df_w2,
                            ss_err, tol, alpha));
  }
  return rows;
}

std::vector<AnovaRow> mixed_anova(const std::vector<PanelObservation>& panel,
                                  const std::string& feature, double alpha) {
  const PanelLayout layout = layout_panel(panel, feature);
  std::vector<int> groups(layout.subject_group.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    groups[i] = static_cast<int>(layout.subject_group[i]);
  }
  return mixed_anova(groups, layout.values, alpha);
}

AnovaRow one_way_anova(const std::vector<PanelObservation>& panel,
                       const std::string& feature, double alpha) {
  const PanelLayout layout = layout_panel(panel, feature);
  std::vector<double> period_mean(layout.values.size());
  for (std::size_t i = 0; i < layout.values.size(); ++i) {
    period_mean[i] = static_cast<double>(mean_of(layout.values[i]));
  }
  return one_way_anova(group_samples(layout.subject_group, period_mean), alpha);
}

std::vector<std::pair<int, AnovaRow>> one_way_anova_by_snapshot(
    const std::vector<PanelObservation>& panel, const std::string& feature,
    double alpha) {
  const PanelLayout layout = layout_panel(panel, feature);
  std::vector<std::pair<int, AnovaRow>> rows;
  for (std::size_t t = 0; t < layout.times.size(); ++t) {
    std::vector<double> column(layout.values.size());
    for (std::size_t i = 0; i < layout.values.size(); ++i) {
      column[i] = layout.values[i][t];
    }
    rows.emplace_back(
        layout.times[t],
        one_way_anova(group_samples(layout.subject_group, column), alpha));
  }
  return rows;
}

MeansTable group_means(const std::vector<PanelObservation>& panel,
                       const std::string& feature) {
  if (panel.empty()) throw AnalysisError("panel is empty");

  std::set<GroupLabel> groups_seen;
  std::set<int> times_seen;
  // (group, t) -> (area_id, value), gathered then sorted for a fixed order.
  std::map<std::pair<GroupLabel, int>,
           std::vector<std::pair<std::string, double>>>
      cells;
  for (const PanelObservation& obs : panel) {
    groups_seen.insert(obs.group);
    times_seen.insert(obs.t);
    cells[{obs.group, obs.t}].emplace_back(obs.area_id,
                                           panel_feature(obs, feature));
  }

  MeansTable table;
  table.groups.assign(groups_seen.begin(), groups_seen.end());
  table.times.assign(times_seen.begin(), times_seen.end());
  for (const GroupLabel gl : table.groups) {
    std::vector<MeansCell> row;
    for (const int t : table.times) {
      auto it = cells.find({gl, t});
      if (it == cells.end() || it->second.empty()) {
        throw AnalysisError(std::string("no observations for group ") +
                            to_string(gl) + " at t=" + std::to_string(t));
      }
      std::sort(it->second.begin(), it->second.end());
      std::vector<double> vals;
      vals.reserve(it->second.size());
      for (const auto& [area_id, v] : it->second) vals.push_back(v);

      MeansCell cell;
      cell.n = vals.size();
      const long double mean = mean_of(vals);
      cell.mean = static_cast<double>(mean);
      if (cell.n >= 2) {
        std::vector<long double> sq;
        sq.reserve(vals.size());
        for (const double v : vals) {
          const long double d = v - mean;
          sq.push_back(d * d);
        }
        const long double var = sum_ld(sq) / static_cast<long double>(cell.n - 1);
        cell.se = static_cast<double>(
            std::sqrt(var / static_cast<long double>(cell.n)));
      }
      cell.ci_half = 1.96 * cell.se;
      row.push_back(cell);
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

}  // namespace wardflow
