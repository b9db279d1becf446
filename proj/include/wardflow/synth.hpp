#ifndef WARDFLOW_SYNTH_HPP
#define WARDFLOW_SYNTH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wardflow/panel.hpp"
#include "wardflow/types.hpp"

namespace wardflow {

/// Planted feature-mean model: cell mean for group g at snapshot t is
/// base + group_shift[g] + time_trend[t-1] + interaction[g][t-1], with
/// N(0, noise_sd) noise per (ward, t).
struct SynthEffect {
  std::array<double, 4> group_shift{};
  std::array<double, 3> time_trend{};
  std::array<std::array<double, 3>, 4> interaction{};
  double noise_sd = 1.0;
};

/// Deliberately broken rows appended to transitions.csv so validation has
/// something to find. Zero by default.
struct SynthDefects {
  int unknown_venue_transitions = 0;
  int self_loop_transitions = 0;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  int ward_count = 0;
  int venues_per_ward_min = 0;  // initial venue stock per ward, inclusive range
  int venues_per_ward_max = 0;
  std::array<int, 4> group_sizes{};               // G1..G4, sums to ward_count
  std::array<double, 4> cultural_share_by_group{};
  std::array<double, 4> expenditure_ratio_by_group{};  // CE/TE per group
  SynthEffect effect;
  int transitions_per_year = 0;
  double inter_area_mix = 0.0;  // fraction of transitions crossing wards
  SynthDefects defects;
};

/// Strict JSON: unknown keys, missing fields, or invariant violations all
/// throw InputError.
SynthConfig parse_synth_config(const std::string& json_text);
SynthConfig load_synth_config(const std::string& path);
std::string synth_config_json(const SynthConfig& config);
void validate_config(const SynthConfig& config);

struct GroundTruth {
  std::map<std::string, GroupLabel> groups;  // ward -> planted label
  /// Expected venue_created_number cell means, [group][t-1], before noise.
  std::array<std::array<double, 3>, 4> cell_means{};
  std::array<int, 4> group_sizes{};
};

/// Planted labels and expected means without building the city.
GroundTruth ground_truth(const SynthConfig& config);

struct CityBundle {
  std::vector<Venue> venues;
  std::vector<Transition> transitions;         // valid rows
  std::vector<Transition> defect_transitions;  // planted broken rows
  std::vector<AreaProfile> profiles;           // one ward-level profile each
  GroundTruth truth;
};

/// Deterministic for a given config: same seed, same bytes. Each table draws
/// from its own named random stream, so growing one table never perturbs
/// another.
CityBundle generate_city(const SynthConfig& config);

/// Writes venues.csv, transitions.csv (defect rows appended), imd.csv,
/// expenditure.csv, polygons.txt and ground_truth.json into dir.
void write_city(const CityBundle& bundle, const SynthConfig& config,
                const std::string& dir);

/// Calendar years the generator plants effects for, in snapshot order.
inline constexpr std::array<int, 3> kSnapshotYears = {2011, 2012, 2013};

/// Venue-creation base rate per (ward, year); effects shift around this.
inline constexpr double kBaseCreatedPerYear = 20.0;

}  // namespace wardflow

#endif  // WARDFLOW_SYNTH_HPP
