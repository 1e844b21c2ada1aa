#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fleetroute/model.hpp"
#include "fleetroute/osmnet.hpp"
#include "fleetroute/solver.hpp"

namespace fleetroute {

// Fixed color cycle, indexed by trip order.
inline constexpr const char* kTripColors[12] = {
    "#1f78b4", "#e31a1c", "#33a02c", "#ff7f00", "#6a3d9a", "#b15928",
    "#a6cee3", "#fb9a99", "#b2df8a", "#fdbf6f", "#cab2d6", "#8c8c00"};

const char* trip_color(std::size_t trip_index);

// Road geometry of one trip. legs[k] runs from stop k-1 (or the depot) to
// stop k (or back to the depot).
struct RouteGeometry {
  std::size_t trip = 0;
  std::vector<std::vector<NodeId>> legs;
  double dist_m = 0.0;
  Seconds time_s = 0;

  std::vector<NodeId> vertices() const;
};

/// Shortest-path geometry for every trip on its vehicle type's profile
/// graph. `graphs` must contain a graph for every fleet profile.
std::vector<RouteGeometry> resolve_geometries(const ProblemInstance& inst,
                                              const Solution& sol,
                                              std::span<const ProfiledGraph> graphs);

/// RFC 7946 FeatureCollection: one LineString per trip, one Point per
/// visited customer (numbered in visit order), the depot and focal points.
std::string routes_to_geojson(const ProblemInstance& inst, const Solution& sol,
                              std::span<const RouteGeometry> geometries,
                              const RoadNetwork& net, const std::string& zone = {});

/// Concatenates per-zone collections; facilities appear once.
std::string merge_geojson(std::span<const std::string> documents);

/// Equirectangular rendering fitted to the features with a 5% margin.
std::string render_svg(const std::string& geojson, int canvas_px = 800);

struct ZoneResult {
  std::string zone;
  const ProblemInstance* instance = nullptr;
  const Solution* solution = nullptr;
};

std::string summary_report(std::span<const ZoneResult> zones,
                           std::optional<long long> baseline_trips = std::nullopt);
std::string summary_report(const ProblemInstance& inst, const Solution& sol,
                           std::optional<long long> baseline_trips = std::nullopt);
std::string summary_report(const ProblemInstance& inst, const Solution& sol,
                           const Solution& baseline);

// "-13%" style change in trip count relative to a baseline.
std::string trip_change(long long trips, long long baseline_trips);

}  // namespace fleetroute
