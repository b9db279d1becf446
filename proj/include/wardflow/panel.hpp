#ifndef WARDFLOW_PANEL_HPP
#define WARDFLOW_PANEL_HPP

#include <array>
#include <string>
#include <string_view>

namespace wardflow {

/// Socio-cultural ward group: deprivation (IMD 2010 vs. city average) crossed
/// with cultural advantage (CEA > 1).
enum class GroupLabel {
  G1,  // less deprived, more advantaged
  G2,  // more deprived, less advantaged
  G3,  // more deprived, more advantaged
  G4,  // less deprived, less advantaged
};

const char* to_string(GroupLabel label);
const char* describe(GroupLabel label);
bool parse_group_label(const std::string& text, GroupLabel& out);

inline constexpr std::array<GroupLabel, 4> kAllGroups = {
    GroupLabel::G1, GroupLabel::G2, GroupLabel::G3, GroupLabel::G4};

/// One (area, snapshot) row of derived features; the unit record of every
/// downstream analysis.
struct PanelObservation {
  std::string area_id;
  GroupLabel group = GroupLabel::G1;
  int t = 0;  // 1-based snapshot index

  double node_number = 0.0;
  double venue_created_number = 0.0;
  double venue_created_density = 0.0;
  double in_degree_centrality = 0.0;
  double out_degree_centrality = 0.0;
  double avg_clustering = 0.0;
};

/// Canonical feature order, used for panel.csv columns and report ordering.
inline constexpr std::array<const char*, 6> kPanelFeatures = {
    "node_number",          "venue_created_number",  "venue_created_density",
    "in_degree_centrality", "out_degree_centrality", "avg_clustering"};

/// Looks a feature up by name. Throws InputError on an unknown name.
double panel_feature(const PanelObservation& obs, std::string_view name);

}  // namespace wardflow

#endif  // WARDFLOW_PANEL_HPP
