#include "wardflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wardflow/areas.hpp"
#include "wardflow/categories.hpp"
#include "wardflow/cohort.hpp"
#include "wardflow/csv.hpp"
#include "wardflow/ingest.hpp"
#include "wardflow/rng.hpp"

namespace wardflow {
namespace {

using nlohmann::json;

constexpr double kGridSideDeg = 0.01;
constexpr double kGridLat0 = 51.0;
constexpr double kGridLon0 = -0.5;
constexpr double kImdMean = 25.0;
constexpr double kImdGap = 10.0;  // half-distance scale between classes
constexpr std::int64_t kMaxVenues = 9'999'999;

std::string ward_id(int index) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "w%04d", index + 1);
  return buf;
}

std::string venue_id(std::int64_t index) {
  char buf[12];
  std::snprintf(buf, sizeof buf, "v%07lld", static_cast<long long>(index + 1));
  return buf;
}

bool planted_deprived(int group) { return group == 1 || group == 2; }
bool planted_advantaged(int group) { return group == 0 || group == 2; }

double cell_mean(const SynthConfig& config, int group, int t) {
  return kBaseCreatedPerYear + config.effect.group_shift[group] +
         config.effect.time_trend[t - 1] +
         config.effect.interaction[group][t - 1];
}

/// Weighted index draw over cumulative weights; cum is strictly increasing.
int sample_index(Rng& rng, const std::vector<double>& cum) {
  const double u = rng.next_double() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  return static_cast<int>(std::min(idx, cum.size() - 1));
}

void read_real_array(const json& j, const char* key, double* out,
                     std::size_t n) {
  const json& arr = j.at(key);
  if (!arr.is_array() || arr.size() != n) {
    throw InputError(std::string("synth config: ") + key + " must be an array of " +
                     std::to_string(n) + " numbers");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!arr[i].is_number()) {
      throw InputError(std::string("synth config: ") + key +
                       " must contain numbers only");
    }
    out[i] = arr[i].get<double>();
  }
}

void check_keys(const json& j, const char* where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw InputError(std::string("synth config: unknown key \"") + key +
                       "\" in " + where);
    }
  }
}

}  // namespace

void validate_config(const SynthConfig& c) {
  const auto fail = [](const std::string& what) {
    throw InputError("synth config: " + what);
  };
  if (c.ward_count < 1 || c.ward_count > 9999) {
    fail("ward_count must be in [1, 9999]");
  }
  if (c.venues_per_ward_min < 1 ||
      c.venues_per_ward_max < c.venues_per_ward_min) {
    fail("venues_per_ward must be a range with 1 <= min <= max");
  }
  if (static_cast<std::int64_t>(c.ward_count) * c.venues_per_ward_max >
      kMaxVenues) {
    fail("initial venue stock exceeds " + std::to_string(kMaxVenues));
  }
  int total = 0;
  for (const int n : c.group_sizes) {
    if (n < 0) fail("group_sizes must be nonnegative");
    total += n;
  }
  if (total != c.ward_count) {
    fail("group_sizes must sum to ward_count (" +
         std::to_string(c.ward_count) + "), got " + std::to_string(total));
  }
  for (const double s : c.cultural_share_by_group) {
    if (!(s >= 0.0 && s <= 1.0)) {
      fail("cultural_share_by_group entries must be in [0, 1]");
    }
  }
  for (const double r : c.expenditure_ratio_by_group) {
    if (!(r >= 0.0 && r <= 1.0)) {
      fail("expenditure_ratio_by_group entries must be in [0, 1]");
    }
  }
  if (!(c.effect.noise_sd > 0.0) || !std::isfinite(c.effect.noise_sd)) {
    fail("effect.noise_sd must be positive");
  }
  if (c.transitions_per_year < 0 || c.transitions_per_year > 5'000'000) {
    fail("transitions_per_year must be in [0, 5000000]");
  }
  if (!(c.inter_area_mix >= 0.0 && c.inter_area_mix <= 1.0)) {
    fail("inter_area_mix must be in [0, 1]");
  }
  if (c.inter_area_mix > 0.0 && c.ward_count < 2) {
    fail("inter_area_mix > 0 needs at least 2 wards");
  }
  if (c.defects.unknown_venue_transitions < 0 ||
      c.defects.self_loop_transitions < 0) {
    fail("defect counts must be nonnegative");
  }

  // Feasibility of the planted classes. The deprivation split needs wards on
  // the non-deprived side of the mean; the advantage split needs both sides
  // populated (every ward above the city-wide ratio is impossible, and a
  // city of exact ties cannot survive floating-point strictness), with a
  // real gap between the planted ratio levels.
  const int non_deprived = c.group_sizes[0] + c.group_sizes[3];
  if (non_deprived == 0) {
    fail("at least one ward must be planted less deprived (G1 or G4)");
  }
  const int advantaged = c.group_sizes[0] + c.group_sizes[2];
  if (advantaged == 0) {
    fail("at least one ward must be planted culturally advantaged (G1 or G3)");
  }
  if (advantaged == c.ward_count) {
    fail("at least one ward must be planted not advantaged (G2 or G4)");
  }
  double min_adv = 1.0, max_dis = 0.0;
  for (int g = 0; g < 4; ++g) {
    if (c.group_sizes[g] == 0) continue;
    if (planted_advantaged(g)) {
      min_adv = std::min(min_adv, c.expenditure_ratio_by_group[g]);
    } else {
      max_dis = std::max(max_dis, c.expenditure_ratio_by_group[g]);
    }
  }
  if (!(min_adv > max_dis * (1.0 + 1e-6))) {
    fail("expenditure ratios of advantaged groups must strictly exceed the "
         "others");
  }
}

SynthConfig parse_synth_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("synth config: ") + e.what());
  }
  if (!j.is_object()) throw InputError("synth config: top level must be an object");
  check_keys(j, "config",
             {"seed", "ward_count", "venues_per_ward", "group_sizes",
              "cultural_share_by_group", "expenditure_ratio_by_group",
              "effect", "transitions_per_year", "inter_area_mix", "defects"});

  SynthConfig c;
  try {
    c.seed = j.at("seed").get<std::uint64_t>();
    c.ward_count = j.at("ward_count").get<int>();
    const json& range = j.at("venues_per_ward");
    if (!range.is_array() || range.size() != 2) {
      throw InputError("synth config: venues_per_ward must be [min, max]");
    }
    c.venues_per_ward_min = range[0].get<int>();
    c.venues_per_ward_max = range[1].get<int>();
    const json& sizes = j.at("group_sizes");
    if (!sizes.is_array() || sizes.size() != 4) {
      throw InputError("synth config: group_sizes must be 4 counts");
    }
    for (int g = 0; g < 4; ++g) c.group_sizes[g] = sizes[g].get<int>();
    read_real_array(j, "cultural_share_by_group",
                    c.cultural_share_by_group.data(), 4);
    read_real_array(j, "expenditure_ratio_by_group",
                    c.expenditure_ratio_by_group.data(), 4);

    const json& effect = j.at("effect");
    check_keys(effect, "effect",
               {"group_shift", "time_trend", "interaction", "noise_sd"});
    read_real_array(effect, "group_shift", c.effect.group_shift.data(), 4);
    read_real_array(effect, "time_trend", c.effect.time_trend.data(), 3);
    const json& inter = effect.at("interaction");
    if (!inter.is_array() || inter.size() != 4) {
      throw InputError("synth config: interaction must be a 4x3 matrix");
    }
    for (int g = 0; g < 4; ++g) {
      const json& row = inter[g];
      if (!row.is_array() || row.size() != 3) {
        throw InputError("synth config: interaction must be a 4x3 matrix");
      }
      for (int t = 0; t < 3; ++t) {
        if (!row[t].is_number()) {
          throw InputError(
              "synth config: interaction must contain numbers only");
        }
        c.effect.interaction[g][t] = row[t].get<double>();
      }
    }
    c.effect.noise_sd = effect.at("noise_sd").get<double>();
    c.transitions_per_year = j.at("transitions_per_year").get<int>();
    c.inter_area_mix = j.at("inter_area_mix").get<double>();
    if (j.count("defects")) {
      const json& d = j.at("defects");
      check_keys(d, "defects",
                 {"unknown_venue_transitions", "self_loop_transitions"});
      if (d.count("unknown_venue_transitions")) {
        c.defects.unknown_venue_transitions =
            d.at("unknown_venue_transitions").get<int>();
      }
      if (d.count("self_loop_transitions")) {
        c.defects.self_loop_transitions =
            d.at("self_loop_transitions").get<int>();
      }
    }
  } catch (const InputError&) {
    throw;
  } catch (const json::exception& e) {
    throw InputError(std::string("synth config: ") + e.what());
  }
  validate_config(c);
  return c;
}

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_synth_config(buf.str());
}

std::string synth_config_json(const SynthConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["ward_count"] = c.ward_count;
  j["venues_per_ward"] = {c.venues_per_ward_min, c.venues_per_ward_max};
  j["group_sizes"] = c.group_sizes;
  j["cultural_share_by_group"] = c.cultural_share_by_group;
  j["expenditure_ratio_by_group"] = c.expenditure_ratio_by_group;
  j["effect"]["group_shift"] = c.effect.group_shift;
  j["effect"]["time_trend"] = c.effect.time_trend;
  j["effect"]["interaction"] = c.effect.interaction;
  j["effect"]["noise_sd"] = c.effect.noise_sd;
  j["transitions_per_year"] = c.transitions_per_year;
  j["inter_area_mix"] = c.inter_area_mix;
  j["defects"]["unknown_venue_transitions"] =
      c.defects.unknown_venue_transitions;
  j["defects"]["self_loop_transitions"] = c.defects.self_loop_transitions;
  return j.dump(2) + "\n";
}

GroundTruth ground_truth(const SynthConfig& config) {
  validate_config(config);
  GroundTruth truth;
  truth.group_sizes = config.group_sizes;

  std::vector<int> labels;
  labels.reserve(config.ward_count);
  for (int g = 0; g < 4; ++g) {
    labels.insert(labels.end(), config.group_sizes[g], g);
  }
  Rng rng(config.seed, "groups");
  rng.shuffle(labels);
  for (int i = 0; i < config.ward_count; ++i) {
    truth.groups.emplace(ward_id(i), static_cast<GroupLabel>(labels[i]));
  }
  for (int g = 0; g < 4; ++g) {
    for (int t = 1; t <= 3; ++t) {
      truth.cell_means[g][t - 1] = cell_mean(config, g, t);
    }
  }
  return truth;
}

CityBundle generate_city(const SynthConfig& config) {
  validate_config(config);
  CityBundle out;
  out.truth = ground_truth(config);

  const int W = config.ward_count;
  const int cols = static_cast<int>(std::ceil(std::sqrt(W)));
  std::vector<int> label(W);
  for (int i = 0; i < W; ++i) {
    label[i] = static_cast<int>(out.truth.groups.at(ward_id(i)));
  }

  // --- deprivation scores -------------------------------------------------
  // Class centers are placed so the city mean is exactly kImdMean: zero-sum
  // jitter inside each class cannot move it. Every non-deprived ward stays
  // strictly below the mean and every deprived ward strictly above it.
  const int n_deprived = config.group_sizes[1] + config.group_sizes[2];
  const int n_rest = W - n_deprived;
  const double c_rest = kImdMean - 2.0 * kImdGap * n_deprived / W;
  const double c_dep = kImdMean + 2.0 * kImdGap * n_rest / W;
  const double jitter_r =
      kImdGap * std::min(n_deprived, n_rest) / static_cast<double>(W);

  Rng imd_rng(config.seed, "imd");
  std::vector<double> jitter(W);
  double sum_dep = 0, sum_rest = 0;
  for (int i = 0; i < W; ++i) {
    jitter[i] = imd_rng.next_double() * 2.0 - 1.0;
    (planted_deprived(label[i]) ? sum_dep : sum_rest) += jitter[i];
  }
  const double mean_dep = n_deprived > 0 ? sum_dep / n_deprived : 0.0;
  const double mean_rest = n_rest > 0 ? sum_rest / n_rest : 0.0;

  std::vector<double> imd_2010(W), imd_2015(W);
  for (int i = 0; i < W; ++i) {
    const bool dep = planted_deprived(label[i]);
    // Centered jitter lies in [-2, 2]; half the gap radius keeps the class
    // strictly on its side of the mean.
    const double centered = jitter[i] - (dep ? mean_dep : mean_rest);
    imd_2010[i] = (dep ? c_dep : c_rest) + centered * jitter_r / 2.0;
  }
  for (int i = 0; i < W; ++i) {
    imd_2015[i] = 10.0 + 30.0 * imd_rng.next_double();
  }

  // --- expenditure --------------------------------------------------------
  Rng spend_rng(config.seed, "expenditure");
  std::vector<AreaProfile> profiles(W);
  for (int i = 0; i < W; ++i) {
    profiles[i].area_id = ward_id(i);
    profiles[i].level = AreaLevel::Ward;
    profiles[i].imd_2010 = imd_2010[i];
    profiles[i].imd_2015 = imd_2015[i];
    const int row = i / cols, col = i % cols;
    const double lat = kGridLat0 + row * kGridSideDeg;
    const double lon = kGridLon0 + col * kGridSideDeg;
    profiles[i].polygon = {{lat, lon},
                           {lat, lon + kGridSideDeg},
                           {lat + kGridSideDeg, lon + kGridSideDeg},
                           {lat + kGridSideDeg, lon}};
  }
  for (int year = 2010; year <= 2012; ++year) {
    const std::string fy = fiscal_label(year);
    for (int i = 0; i < W; ++i) {
      const double te = 500.0 + 1000.0 * spend_rng.next_double();
      profiles[i].te_by_fy[fy] = te;
      profiles[i].ce_by_fy[fy] =
          config.expenditure_ratio_by_group[label[i]] * te;
    }
  }
  // The planting invariant is checked through the same computation the
  // pipeline uses, fiscal year by fiscal year.
  for (int year = 2010; year <= 2012; ++year) {
    for (const CulturalAdvantage& adv :
         compute_cea(profiles, fiscal_label(year))) {
      const int idx = std::stoi(adv.area_id.substr(1)) - 1;
      if ((adv.cea > 1.0) != planted_advantaged(label[idx])) {
        throw InputError(
            "synth config: expenditure ratios fail to separate advantaged "
            "groups at " +
            adv.area_id + " (" + fiscal_label(year) + ")");
      }
    }
  }

  // --- venues -------------------------------------------------------------
  const auto place_venue = [&](Rng& rng, int ward, std::int64_t created_at) {
    const int row = ward / cols, col = ward % cols;
    Venue v;
    v.lat = kGridLat0 +
            (row + 0.05 + 0.9 * rng.next_double()) * kGridSideDeg;
    v.lon = kGridLon0 +
            (col + 0.05 + 0.9 * rng.next_double()) * kGridSideDeg;
    const bool cultural =
        rng.next_double() < config.cultural_share_by_group[label[ward]];
    const std::vector<std::string>& pool =
        cultural ? cultural_categories() : ordinary_categories();
    v.category =
        pool[static_cast<std::size_t>(rng.next_int(0, pool.size() - 1))];
    v.created_at = created_at;
    v.area_id = ward_id(ward);
    return v;
  };

  std::vector<std::vector<std::size_t>> by_ward(W);  // venue indices, in order
  std::vector<std::array<std::size_t, 4>> eligible(W);  // prefix counts per t

  Rng venues_rng(config.seed, "venues");
  const Interval stock_window = calendar_year_window(2010);
  for (int i = 0; i < W; ++i) {
    const std::int64_t n = venues_rng.next_int(config.venues_per_ward_min,
                                               config.venues_per_ward_max);
    for (std::int64_t k = 0; k < n; ++k) {
      const std::int64_t at =
          venues_rng.next_int(stock_window.start, stock_window.end - 1);
      by_ward[i].push_back(out.venues.size());
      out.venues.push_back(place_venue(venues_rng, i, at));
    }
    eligible[i][0] = by_ward[i].size();
  }

  Rng created_rng(config.seed, "created");
  for (int t = 1; t <= 3; ++t) {
    const Interval window = calendar_year_window(kSnapshotYears[t - 1]);
    for (int i = 0; i < W; ++i) {
      const double mu = cell_mean(config, label[i], t) +
                        config.effect.noise_sd * created_rng.next_normal();
      const std::int64_t n = std::max<std::int64_t>(0, std::llround(mu));
      for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t at =
            created_rng.next_int(window.start, window.end - 1);
        by_ward[i].push_back(out.venues.size());
        out.venues.push_back(place_venue(created_rng, i, at));
      }
      eligible[i][t] = by_ward[i].size();
    }
    if (static_cast<std::int64_t>(out.venues.size()) > kMaxVenues) {
      throw InputError("synth config: city exceeds " +
                       std::to_string(kMaxVenues) + " venues");
    }
  }
  for (std::size_t i = 0; i < out.venues.size(); ++i) {
    out.venues[i].venue_id = venue_id(static_cast<std::int64_t>(i));
  }

  // --- transitions --------------------------------------------------------
  // Ward propensity follows the same planted cell means as venue creation,
  // so the flow-based features carry the group/time signal too.
  Rng trans_rng(config.seed, "transitions");
  for (int t = 1; t <= 3; ++t) {
    std::vector<double> cum(W);
    double running = 0.0;
    for (int i = 0; i < W; ++i) {
      running += std::max(0.1, cell_mean(config, label[i], t));
      cum[i] = running;
    }
    const Interval window = calendar_year_window(kSnapshotYears[t - 1]);
    for (int k = 0; k < config.transitions_per_year; ++k) {
      const int src_ward = sample_index(trans_rng, cum);
      bool cross = W > 1 && trans_rng.next_double() < config.inter_area_mix;
      if (!cross && eligible[src_ward][t] < 2) {
        if (W < 2) {
          throw InputError(
              "synth config: cannot sample a transition in a one-venue city");
        }
        cross = true;
      }
      int dst_ward = src_ward;
      if (cross) {
        do {
          dst_ward = sample_index(trans_rng, cum);
        } while (dst_ward == src_ward);
      }
      const std::size_t src_pick = static_cast<std::size_t>(
          trans_rng.next_int(0, eligible[src_ward][t] - 1));
      const std::size_t src_idx = by_ward[src_ward][src_pick];
      std::size_t dst_idx = src_idx;
      do {
        const std::size_t dst_pick = static_cast<std::size_t>(
            trans_rng.next_int(0, eligible[dst_ward][t] - 1));
        dst_idx = by_ward[dst_ward][dst_pick];
      } while (dst_idx == src_idx);
      Transition row;
      row.from_venue = out.venues[src_idx].venue_id;
      row.to_venue = out.venues[dst_idx].venue_id;
      row.occurred_at = trans_rng.next_int(window.start, window.end - 1);
      row.count = 1;
      out.transitions.push_back(std::move(row));
    }
  }

  // --- planted defects ----------------------------------------------------
  Rng defect_rng(config.seed, "defects");
  const Interval all_years = {calendar_year_window(kSnapshotYears[0]).start,
                              calendar_year_window(kSnapshotYears[2]).end};
  const auto any_venue = [&]() {
    return out.venues[static_cast<std::size_t>(
                          defect_rng.next_int(0, out.venues.size() - 1))]
        .venue_id;
  };
  for (int k = 0; k < config.defects.unknown_venue_transitions; ++k) {
    Transition row;
    row.from_venue = "ghost-" + std::to_string(k + 1);
    row.to_venue = any_venue();
    row.occurred_at = defect_rng.next_int(all_years.start, all_years.end - 1);
    row.count = 1;
    out.defect_transitions.push_back(std::move(row));
  }
  for (int k = 0; k < config.defects.self_loop_transitions; ++k) {
    Transition row;
    row.from_venue = any_venue();
    row.to_venue = row.from_venue;
    row.occurred_at = defect_rng.next_int(all_years.start, all_years.end - 1);
    row.count = 1;
    out.defect_transitions.push_back(std::move(row));
  }

  out.profiles = std::move(profiles);
  return out;
}

void write_city(const CityBundle& bundle, const SynthConfig& config,
                const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto open = [&](const char* name) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
  };

  {
    std::ofstream out = open("venues.csv");
    write_venues(out, bundle.venues);
  }
  {
    std::vector<Transition> rows = bundle.transitions;
    rows.insert(rows.end(), bundle.defect_transitions.begin(),
                bundle.defect_transitions.end());
    std::ofstream out = open("transitions.csv");
    write_transitions(out, rows);
  }
  {
    std::ofstream out = open("imd.csv");
    write_imd(out, bundle.profiles);
  }
  {
    std::ofstream out = open("expenditure.csv");
    write_expenditure(out, bundle.profiles);
  }
  {
    std::ofstream out = open("polygons.txt");
    write_polygons(out, bundle.profiles);
  }
  {
    json truth;
    truth["seed"] = config.seed;
    truth["cell_means_feature"] = "venue_created_number";
    for (int g = 0; g < 4; ++g) {
      const std::string name = to_string(static_cast<GroupLabel>(g));
      truth["cell_means"][name] = bundle.truth.cell_means[g];
      truth["group_sizes"][name] = bundle.truth.group_sizes[g];
    }
    for (const auto& [ward, group] : bundle.truth.groups) {
      truth["groups"][ward] = to_string(group);
    }
    std::ofstream out = open("ground_truth.json");
    out << truth.dump(2) << "\n";
  }
}

}  // namespace wardflow
