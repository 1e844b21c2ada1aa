#include "fleetroute/cluster.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "fleetroute/errors.hpp"
#include "fleetroute/model.hpp"

namespace fleetroute {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller index always becomes the root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<ProximityCluster> build_clusters(std::span<const GeoPoint> points,
                                             double radius_m) {
  if (!(radius_m > 0.0)) throw ValidationError("cluster radius must be positive");
  const std::size_t n = points.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (haversine_m(points[i], points[j]) <= radius_m) sets.unite(i, j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);

  std::vector<ProximityCluster> clusters;
  for (auto& [root, members] : groups) {
    if (members.size() < 2) continue;
    clusters.push_back({static_cast<int>(clusters.size()), std::move(members)});
  }
  return clusters;
}

std::vector<ProximityCluster> build_clusters(const ProblemInstance& inst,
                                             double radius_m) {
  std::vector<GeoPoint> points;
  points.reserve(inst.customers.size());
  for (const auto& c : inst.customers) points.push_back(c.location);
  return build_clusters(points, radius_m);
}

std::vector<int> cluster_labels(std::span<const ProximityCluster> clusters,
                                std::size_t customer_count) {
  std::vector<int> labels(customer_count, -1);
  for (const auto& c : clusters) {
    for (const auto m : c.members) {
      if (m < customer_count) labels[m] = c.id;
    }
  }
  return labels;
}

std::size_t count_runs(const StopSequence& stops, std::span<const int> labels) {
  std::size_t runs = 0;
  int prev = -1;
  for (const auto s : stops) {
    const int label = s < labels.size() ? labels[s] : -1;
    if (label >= 0 && label != prev) ++runs;
    prev = label;
  }
  return runs;
}

long long count_breaks(std::span<const StopSequence> trips,
                       std::span<const ProximityCluster> clusters) {
  long long breaks = 0;
  for (const auto& cluster : clusters) {
    const std::set<std::size_t> members(cluster.members.begin(),
                                        cluster.members.end());
    long long trips_touched = 0;
    for (const auto& trip : trips) {
      long long runs = 0;
      bool inside = false;
      for (const auto s : trip) {
        const bool member = members.contains(s);
        if (member && !inside) ++runs;
        inside = member;
      }
      if (runs > 0) {
        ++trips_touched;
        breaks += runs - 1;
      }
    }
    if (trips_touched > 1) breaks += trips_touched - 1;
  }
  return breaks;
}

}  // namespace fleetroute
