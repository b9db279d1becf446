#include "wardflow/panel.hpp"

#include <string>

#include "wardflow/types.hpp"

namespace wardflow {

const char* to_string(GroupLabel label) {
  switch (label) {
    case GroupLabel::G1: return "G1";
    case GroupLabel::G2: return "G2";
    case GroupLabel::G3: return "G3";
    case GroupLabel::G4: return "G4";
  }
  return "G?";
}

const char* describe(GroupLabel label) {
  switch (label) {
    case GroupLabel::G1: return "less deprived, more advantaged";
    case GroupLabel::G2: return "more deprived, less advantaged";
    case GroupLabel::G3: return "more deprived, more advantaged";
    case GroupLabel::G4: return "less deprived, less advantaged";
  }
  return "unknown";
}

bool parse_group_label(const std::string& text, GroupLabel& out) {
  for (const GroupLabel g : kAllGroups) {
    if (text == to_string(g)) {
      out = g;
      return true;
    }
  }
  return false;
}

double panel_feature(const PanelObservation& obs, std::string_view name) {
  if (name == "node_number") return obs.node_number;
  if (name == "venue_created_number") return obs.venue_created_number;
  if (name == "venue_created_density") return obs.venue_created_density;
  if (name == "in_degree_centrality") return obs.in_degree_centrality;
  if (name == "out_degree_centrality") return obs.out_degree_centrality;
  if (name == "avg_clustering") return obs.avg_clustering;
  throw InputError("unknown panel feature: " + std::string(name));
}

}  // namespace wardflow
