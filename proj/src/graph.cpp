#include "wardflow/graph.hpp"

#include <algorithm>
#include <map>

#include "wardflow/stats.hpp"

namespace wardflow {

SnapshotGraph SnapshotGraph::build(const std::vector<Transition>& transitions,
                                   int t, const Interval& window) {
  SnapshotGraph g;
  g.t_ = t;
  g.window_ = window;

  // Aggregate counts per ordered pair; map keys double as the sorted id table.
  std::map<std::pair<std::string_view, std::string_view>, std::int64_t>
      weights;
  std::vector<std::string_view> endpoints;
  for (const Transition& tr : transitions) {
    if (!window.contains(tr.occurred_at)) continue;
    if (tr.from_venue == tr.to_venue) continue;
    weights[{tr.from_venue, tr.to_venue}] += tr.count;
    endpoints.push_back(tr.from_venue);
    endpoints.push_back(tr.to_venue);
  }
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                  endpoints.end());

  g.node_ids_.reserve(endpoints.size());
  for (const std::string_view id : endpoints) g.node_ids_.emplace_back(id);
  g.out_.resize(g.node_ids_.size());
  g.in_.resize(g.node_ids_.size());

  auto index_of = [&](std::string_view id) {
    return static_cast<std::uint32_t>(
        std::lower_bound(endpoints.begin(), endpoints.end(), id) -
        endpoints.begin());
  };
  for (const auto& [pair, weight] : weights) {
    const std::uint32_t from = index_of(pair.first);
    const std::uint32_t to = index_of(pair.second);
    g.out_[from].emplace_back(to, weight);
    g.in_[to].push_back(from);
  }
  // map iteration is ordered, so out_ lists arrive sorted by target already;
  // in_ lists arrive sorted by source for the same reason.
  g.edge_count_ = weights.size();
  return g;
}

std::optional<std::uint32_t> SnapshotGraph::find(
    std::string_view venue_id) const {
  const auto it =
      std::lower_bound(node_ids_.begin(), node_ids_.end(), venue_id);
  if (it == node_ids_.end() || *it != venue_id) return std::nullopt;
  return static_cast<std::uint32_t>(it - node_ids_.begin());
}

std::span<const SnapshotGraph::Edge> SnapshotGraph::out_edges(
    std::uint32_t node) const {
  return out_[node];
}

std::span<const std::uint32_t> SnapshotGraph::in_neighbors(
    std::uint32_t node) const {
  return in_[node];
}

bool SnapshotGraph::has_edge(std::uint32_t from, std::uint32_t to) const {
  const auto& edges = out_[from];
  const auto it = std::lower_bound(
      edges.begin(), edges.end(), to,
      [](const Edge& e, std::uint32_t target) { return e.first < target; });
  return it != edges.end() && it->first == to;
}

std::int64_t SnapshotGraph::edge_weight(std::uint32_t from,
                                        std::uint32_t to) const {
  const auto& edges = out_[from];
  const auto it = std::lower_bound(
      edges.begin(), edges.end(), to,
      [](const Edge& e, std::uint32_t target) { return e.first < target; });
  return (it != edges.end() && it->first == to) ? it->second : 0;
}

double SnapshotGraph::local_clustering(std::uint32_t node) const {
  // N(i) = in-neighbors ∪ out-neighbors, both already sorted.
  std::vector<std::uint32_t> nbrs;
  nbrs.reserve(in_[node].size() + out_[node].size());
  nbrs.assign(in_[node].begin(), in_[node].end());
  for (const Edge& e : out_[node]) nbrs.push_back(e.first);
  std::sort(nbrs.begin(), nbrs.end());
  nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());

  const std::size_t k = nbrs.size();
  if (k <= 1) return 0.0;

  // L_i: directed edges with both endpoints in N(i), counted by merging
  // each neighbor's sorted out-list against the sorted neighbor set.
  std::size_t links = 0;
  for (const std::uint32_t u : nbrs) {
    const auto& edges = out_[u];
    std::size_t a = 0, b = 0;
    while (a < edges.size() && b < k) {
      const std::uint32_t target = edges[a].first;
      if (target < nbrs[b]) {
        ++a;
      } else if (nbrs[b] < target) {
        ++b;
      } else {
        if (target != u) ++links;  // u ∈ N(i) but u→u cannot occur anyway
        ++a;
        ++b;
      }
    }
  }
  return static_cast<double>(links) /
         (static_cast<double>(k) * static_cast<double>(k - 1));
}

double SnapshotGraph::local_clustering(std::string_view venue_id) const {
  const auto node = find(venue_id);
  if (!node) {
    throw AnalysisError("node not in graph: " + std::string(venue_id));
  }
  return local_clustering(*node);
}

double SnapshotGraph::average_clustering() const {
  if (empty()) {
    throw AnalysisError("average clustering undefined on an empty graph");
  }
  std::vector<double> local(node_count());
  for (std::uint32_t v = 0; v < node_count(); ++v) {
    local[v] = local_clustering(v);
  }
  return pairwise_sum(local) / static_cast<double>(node_count());
}

GraphSummary graph_summary(const SnapshotGraph& g) {
  if (g.empty()) {
    throw AnalysisError("graph summary undefined on an empty graph");
  }
  GraphSummary s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  s.avg_clustering = g.average_clustering();
  s.avg_degree = 2.0 * static_cast<double>(s.edge_count) /
                 static_cast<double>(s.node_count);
  return s;
}

}  // namespace wardflow
