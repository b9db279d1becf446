#ifndef WARDFLOW_AREAS_HPP
#define WARDFLOW_AREAS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "wardflow/graph.hpp"
#include "wardflow/types.hpp"

namespace wardflow {

enum class DensityMode { PerKm2, PerVenue };

const char* to_string(DensityMode mode);
bool parse_density_mode(const std::string& text, DensityMode& out);

/// The per-(area, snapshot) feature record feeding the panel.
struct AreaSnapshotMetrics {
  std::string area_id;
  int t = 0;
  double node_number = 0.0;
  double venue_created_number = 0.0;
  double venue_created_density = 0.0;
  double in_degree_centrality = 0.0;
  double out_degree_centrality = 0.0;
  double avg_clustering = 0.0;
};

struct CulturalAdvantage {
  std::string area_id;
  double cea = 0.0;
  double cva = 0.0;
};

/// Even-odd ray casting; points on the boundary count as inside.
/// Throws InputError on a polygon with fewer than 3 distinct vertices.
bool point_in_polygon(const LatLon& point, const PolygonRing& polygon);

/// Shoelace area after an equirectangular projection about the polygon's
/// centroid latitude. Orientation-independent, always positive; degenerate
/// (collinear or <3 distinct vertices) polygons throw InputError.
double polygon_area_km2(const PolygonRing& polygon);

struct AreaAssignment {
  std::map<std::string, std::string> area_of_venue;
  std::vector<std::string> unassigned;  // venues inside no polygon
  std::vector<Diagnostic> diagnostics;  // ambiguities, unknown explicit ids
};

/// Explicit venue.area_id wins over geometry; geometric matching considers
/// ward-level polygons (boroughs contain their wards wholesale and would
/// make every venue ambiguous). A venue inside several polygons goes to the
/// first by sorted area_id, with a diagnostic.
AreaAssignment resolve_areas(const std::vector<Venue>& venues,
                             const std::vector<AreaProfile>& profiles);

struct FlowCentrality {
  double in = 0.0;
  double out = 0.0;
};

/// Weighted inter-area flows: an edge u->v adds its weight to out[area(u)]
/// and in[area(v)] when the areas differ; intra-area edges count for
/// neither. Unassigned nodes are excluded, one diagnostic each.
std::map<std::string, FlowCentrality> area_flow_centralities(
    const SnapshotGraph& g, const std::map<std::string, std::string>& assignment,
    std::vector<Diagnostic>* diagnostics = nullptr);

/// One record per ward-level profile for snapshot t, ordered by area_id.
/// Areas whose polygon area cannot be computed under PerKm2 are skipped
/// with a diagnostic.
std::vector<AreaSnapshotMetrics> area_snapshot_metrics(
    const SnapshotGraph& g, const std::vector<Venue>& venues,
    const std::map<std::string, std::string>& assignment,
    const std::vector<AreaProfile>& profiles, int t,
    DensityMode density_mode = DensityMode::PerKm2,
    std::vector<Diagnostic>* diagnostics = nullptr);

/// CEA_i = (CE_i/TE_i) / (sum CE / sum TE) over all given profiles for one
/// fiscal year. Throws AnalysisError on TE_i = 0, a missing fiscal year, or
/// a zero city-wide cultural total.
std::vector<CulturalAdvantage> compute_cea(
    const std::vector<AreaProfile>& profiles, const std::string& fiscal_year);

///// CVA_i over venue counts: cultural share of an area's venues against the
/// city-wide share. Areas are those appearing in the assignment; throws
/// AnalysisError when no cultural venue exists anywhere.
std::vector<CulturalAdvantage> compute_cva(
    const std::vector<Venue>& venues,
    const std::map<std::string, std::string>& assignment,
    const std::set<std::string>& cultural_categories);

}  // namespace wardflow

#endif  // WARDFLOW_AREAS_HPP
