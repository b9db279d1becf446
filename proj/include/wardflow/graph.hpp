#ifndef WARDFLOW_GRAPH_HPP
#define WARDFLOW_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wardflow/types.hpp"

namespace wardflow {

/// One yearly snapshot G_t: directed, weighted, immutable once built. Node
/// ids are interned; indices are positions in the sorted venue-id table.
class SnapshotGraph {
 public:
  using Edge = std::pair<std::uint32_t, std::int64_t>;  // (target, weight)

  SnapshotGraph() = default;

  /// Aggregates in-window transitions into weighted edges. Self-loops are
  /// skipped (rejected upstream at ingest; never representable here).
  static SnapshotGraph build(const std::vector<Transition>& transitions, int t,
                             const Interval& window);

  int t() const { return t_; }
  const Interval& window() const { return window_; }
  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return node_ids_.empty(); }

  /// Sorted ascending; the index of an id here is its node index.
  const std::vector<std::string>& node_ids() const { return node_ids_; }
  std::optional<std::uint32_t> find(std::string_view venue_id) const;

  std::span<const Edge> out_edges(std::uint32_t node) const;
  std::span<const std::uint32_t> in_neighbors(std::uint32_t node) const;
  bool has_edge(std::uint32_t from, std::uint32_t to) const;
  std::int64_t edge_weight(std::uint32_t from, std::uint32_t to) const;

  std::size_t out_degree(std::uint32_t node) const {
    return out_edges(node).size();
  }
  std::size_t in_degree(std::uint32_t node) const {
    return in_neighbors(node).size();
  }

  /// C_i = L_i / (k_i (k_i - 1)) with N(i) the union of in- and
  /// out-neighbors and L_i the directed edges among them; 0 when k_i <= 1.
  double local_clustering(std::uint32_t node) const;
  /// Same by venue id; throws AnalysisError for an id not in the graph.
  double local_clustering(std::string_view venue_id) const;

  /// Mean of local_clustering over all nodes in sorted-id order.
  /// Throws AnalysisError on an empty graph.
  double average_clustering() const;

 private:
  int t_ = 0;
  Interval window_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> node_ids_;
  std::vector<std::vector<Edge>> out_;          // sorted by target
  std::vector<std::vector<std::uint32_t>> in_;  // sorted
};

struct GraphSummary {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double avg_clustering = 0.0;
  double avg_degree = 0.0;  // 2|E|/|V|
};

/// Throws AnalysisError on an empty graph.
GraphSummary graph_summary(const SnapshotGraph& g);

}  // namespace wardflow

#endif  // WARDFLOW_GRAPH_HPP
