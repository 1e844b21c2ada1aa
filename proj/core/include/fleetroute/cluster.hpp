#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fleetroute/geo.hpp"

namespace fleetroute {

struct ProblemInstance;

// Customer indices visited by one trip, in order (depot excluded).
using StopSequence = std::vector<std::size_t>;

struct ProximityCluster {
  int id = 0;
  std::vector<std::size_t> members;  // ascending customer indices, size >= 2
};

/// Single-linkage grouping: customers closer than `radius_m` (haversine)
/// are joined transitively. Singletons are dropped; ids follow the smallest
/// member index.
std::vector<ProximityCluster> build_clusters(std::span<const GeoPoint> points,
                                             double radius_m);
std::vector<ProximityCluster> build_clusters(const ProblemInstance& inst,
                                             double radius_m);

// Cluster id per customer index, -1 for unclustered customers.
std::vector<int> cluster_labels(std::span<const ProximityCluster> clusters,
                                std::size_t customer_count);

// Maximal blocks of consecutive stops that belong to one cluster.
std::size_t count_runs(const StopSequence& stops, std::span<const int> labels);

/// Non-contiguous cluster visits. Within a trip every run of a cluster after
/// the first is one break; a cluster spread over several trips adds one
/// break per extra trip.
long long count_breaks(std::span<const StopSequence> trips,
                       std::span<const ProximityCluster> clusters);

}  // namespace fleetroute
