#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>
#include <utility>

#include "fleetroute/osmnet.hpp"
#include "search.hpp"

namespace fleetroute {

ProfiledGraph::ProfiledGraph(const RoadNetwork& net, VehicleProfile profile)
    : profile_(std::move(profile)) {
  ids_.reserve(net.nodes.size());
  for (const auto& [id, p] : net.nodes) ids_.push_back(id);

  struct Directed {
    std::uint32_t from;
    std::uint32_t to;
    Seconds weight;
    std::int64_t mm;
  };
  std::vector<Directed> directed;
  directed.reserve(net.edges.size() * 2);
  for (const auto& e : net.edges) {
    if (!profile_.allows(e.road_class)) continue;
    const auto from = index_of(e.from);
    const auto to = index_of(e.to);
    if (!from || !to) {
      throw ValidationError("edge references a node missing from the network");
    }
    const Seconds w = travel_seconds(e.length_m, profile_.speed_kmh(e.road_class));
    const auto mm = std::max<std::int64_t>(1, std::llround(e.length_m * 1000.0));
    directed.push_back({*from, *to, w, mm});
    if (!e.oneway) directed.push_back({*to, *from, w, mm});
  }
  // Parallel arcs collapse to the cheapest (weight, distance) pair.
  std::sort(directed.begin(), directed.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.to, a.weight, a.mm) <
           std::tie(b.from, b.to, b.weight, b.mm);
  });

  offsets_.assign(ids_.size() + 1, 0);
  incident_.assign(ids_.size(), 0);
  for (std::size_t i = 0; i < directed.size(); ++i) {
    const auto& d = directed[i];
    if (i > 0 && directed[i - 1].from == d.from && directed[i - 1].to == d.to) {
      continue;
    }
    arcs_.push_back({d.to, d.weight, d.mm});
    ++offsets_[d.from + 1];
    incident_[d.from] = 1;
    incident_[d.to] = 1;
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::optional<std::uint32_t> ProfiledGraph::index_of(NodeId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - ids_.begin());
}

std::span<const ProfiledGraph::Arc> ProfiledGraph::out_arcs(
    std::uint32_t index) const {
  return {arcs_.data() + offsets_[index], offsets_[index + 1] - offsets_[index]};
}

ProfiledGraph build_profiled_graph(const RoadNetwork& net,
                                   const VehicleProfile& profile) {
  return ProfiledGraph(net, profile);
}

namespace detail {

void SearchTree::reset(std::size_t n) {
  if (time_.size() != n) {
    time_.assign(n, kUnreachable);
    length_.assign(n, 0);
    parent_.assign(n, kNoParent);
    settled_.assign(n, 0);
    tree_.assign(n, 0);
    touched_.clear();
    return;
  }
  for (const auto v : touched_) {
    time_[v] = kUnreachable;
    length_[v] = 0;
    parent_[v] = kNoParent;
    settled_[v] = 0;
    tree_[v] = 0;
  }
  touched_.clear();
}

void SearchTree::run(const ProfiledGraph& g, std::uint32_t source,
                     std::optional<std::uint32_t> target) {
  reset(g.node_count());

  using Entry = std::tuple<Seconds, std::int64_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  time_[source] = 0;
  length_[source] = 0;
  touched_.push_back(source);
  heap.emplace(0, 0, source);
  while (!heap.empty()) {
    const auto [t, len, u] = heap.top();
    heap.pop();
    if (settled_[u] || t != time_[u] || len != length_[u]) continue;
    settled_[u] = 1;
    if (target && u == *target) break;
    for (const auto& arc : g.out_arcs(u)) {
      const Seconds cand = t + arc.weight_s;
      const std::int64_t cand_len = len + arc.dist_mm;
      auto& best = time_[arc.target];
      if (cand < best || (cand == best && cand_len < length_[arc.target])) {
        if (best == kUnreachable) touched_.push_back(arc.target);
        best = cand;
        length_[arc.target] = cand_len;
        heap.emplace(cand, cand_len, arc.target);
      }
    }
  }
  build_tree(g, source);
}

// Depth-first walk over tight arcs ((time, length) of u plus the arc equals
// that of v) visiting children in ascending node order. Paths are
// enumerated in lexicographic order, so the first visit of a node fixes its
// lexicographically smallest optimal path.
void SearchTree::build_tree(const ProfiledGraph& g, std::uint32_t source) {
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  tree_[source] = 1;
  stack.emplace_back(source, 0);
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto arcs = g.out_arcs(u);
    bool pushed = false;
    while (next < arcs.size()) {
      const auto& arc = arcs[next++];
      const auto v = arc.target;
      if (tree_[v] || !settled_[v] || time_[u] + arc.weight_s != time_[v] ||
          length_[u] + arc.dist_mm != length_[v]) {
        continue;
      }
      tree_[v] = 1;
      parent_[v] = u;
      stack.emplace_back(v, 0);
      pushed = true;
      break;
    }
    if (!pushed) stack.pop_back();
  }
}

}  // namespace detail

PathResult shortest_path(const ProfiledGraph& g, NodeId from, NodeId to) {
  const auto s = g.index_of(from);
  const auto t = g.index_of(to);
  if (!s || !t) {
    throw ValidationError("shortest_path: node " +
                          std::to_string(s ? to : from) +
                          " is not in the network");
  }
  detail::SearchTree tree;
  tree.run(g, *s, *t);
  PathResult result;
  if (!tree.reached(*t)) return result;
  result.reachable = true;
  result.time_s = tree.time(*t);
  result.dist_m = tree.dist(*t);
  for (auto v = *t; v != detail::kNoParent; v = tree.parent(v)) {
    result.nodes.push_back(g.node_id(v));
  }
  std::reverse(result.nodes.begin(), result.nodes.end());
  return result;
}

SnapFailed::SnapFailed(const GeoPoint& point, std::optional<double> best_m)
    : Error("no road node within snap radius of (" + std::to_string(point.lat) +
            ", " + std::to_string(point.lon) + ")" +
            (best_m ? "; nearest is " + std::to_string(*best_m) + " m"
                    : std::string("; no usable node"))),
      point_(point),
      best_m_(best_m) {}

SnapResult snap_point(const RoadNetwork& net,
                      std::span<const ProfiledGraph> graphs, const GeoPoint& p,
                      double max_radius_m) {
  if (!(max_radius_m > 0.0)) {
    throw ValidationError("snap radius must be positive");
  }
  std::optional<SnapResult> best;
  std::uint32_t index = 0;
  // net.nodes iterates in ascending id order, matching graph indices; strict
  // comparison keeps the smallest id on ties.
  for (const auto& [id, loc] : net.nodes) {
    const auto i = index++;
    const bool usable = std::any_of(graphs.begin(), graphs.end(), [&](const auto& g) {
      return g.node_count() == net.nodes.size() ? g.has_incident_arc(i)
                                                : (g.index_of(id) &&
                                                   g.has_incident_arc(*g.index_of(id)));
    });
    if (!usable) continue;
    const double d = haversine_m(p, loc);
    if (!best || d < best->snap_dist_m) best = SnapResult{id, d};
  }
  if (!best || best->snap_dist_m > max_radius_m) {
    throw SnapFailed(p, best ? std::optional<double>(best->snap_dist_m)
                             : std::nullopt);
  }
  return *best;
}

SnapResult snap_point(const RoadNetwork& net, const ProfiledGraph& g,
                      const GeoPoint& p, double max_radius_m) {
  return snap_point(net, std::span<const ProfiledGraph>(&g, 1), p,
                    max_radius_m);
}

}  // namespace fleetroute
