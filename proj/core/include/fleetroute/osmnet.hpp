#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fleetroute/errors.hpp"
#include "fleetroute/geo.hpp"

namespace fleetroute {

using NodeId = std::int64_t;
using Seconds = std::int64_t;

// Sentinel for an unreachable matrix entry or path.
inline constexpr Seconds kUnreachable = std::numeric_limits<Seconds>::max();

struct RoadEdge {
  NodeId from = 0;
  NodeId to = 0;
  double length_m = 0.0;
  std::string road_class;
  bool oneway = false;
};

struct RoadNetwork {
  std::map<NodeId, GeoPoint> nodes;
  std::vector<RoadEdge> edges;

  const GeoPoint& location(NodeId id) const { return nodes.at(id); }
};

/// Parses the OSM XML subset: <node id lat lon>, <way id> with <nd ref> and
/// <tag k v>. Only highway-tagged ways produce edges, one per consecutive
/// node pair; nodes that no kept way references are dropped.
///
/// Throws ParseError for malformed XML (with line/column), for a way that
/// references an undeclared node, and when the result has no edges.
RoadNetwork parse_osm_xml(std::istream& source);

struct VehicleProfile {
  std::string name;
  std::map<std::string, double> speeds;  // km/h per road class
  std::map<std::string, bool> access;
  bool default_access = true;
  double default_speed_kmh = 10.0;

  bool allows(const std::string& road_class) const;
  double speed_kmh(const std::string& road_class) const;
};

/// Reads a JSON array of profiles. Throws ValidationError naming the
/// offending field on non-positive speeds, duplicate names, or an empty
/// document.
std::vector<VehicleProfile> parse_profiles(std::istream& source);

const VehicleProfile& find_profile(std::span<const VehicleProfile> profiles,
                                   const std::string& name);

// max(1, round-half-up(length / speed)), speed in km/h.
Seconds travel_seconds(double length_m, double speed_kmh);

/// Road network restricted to one profile's accessible classes, stored as a
/// compact adjacency list. Node indices follow ascending node id and every
/// adjacency list is sorted by target id, so every traversal is
/// deterministic. Immutable after construction.
class ProfiledGraph {
 public:
  struct Arc {
    std::uint32_t target = 0;
    Seconds weight_s = 0;
    std::int64_t dist_mm = 0;  // length in whole millimeters
  };

  ProfiledGraph(const RoadNetwork& net, VehicleProfile profile);

  const VehicleProfile& profile() const noexcept { return profile_; }
  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t arc_count() const noexcept { return arcs_.size(); }

  NodeId node_id(std::uint32_t index) const { return ids_[index]; }
  std::optional<std::uint32_t> index_of(NodeId id) const;

  std::span<const Arc> out_arcs(std::uint32_t index) const;
  // True if the node has at least one accessible incident edge (either
  // direction).
  bool has_incident_arc(std::uint32_t index) const {
    return incident_[index] != 0;
  }

 private:
  VehicleProfile profile_;
  std::vector<NodeId> ids_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  std::vector<std::uint8_t> incident_;
};

ProfiledGraph build_profiled_graph(const RoadNetwork& net,
                                   const VehicleProfile& profile);

struct PathResult {
  bool reachable = false;
  Seconds time_s = kUnreachable;
  double dist_m = 0.0;
  std::vector<NodeId> nodes;
};

/// Minimum-time path. Equal-time paths are ranked by length (whole
/// millimeters), then by lexicographically smallest node-id sequence. Throws ValidationError if either node is unknown.
PathResult shortest_path(const ProfiledGraph& g, NodeId from, NodeId to);

struct CostMatrixSet {
  std::string profile;
  std::vector<NodeId> points;
  std::vector<Seconds> time_s;  // row-major, kUnreachable when no path
  std::vector<double> dist_m;   // row-major, +inf when no path

  std::size_t size() const noexcept { return points.size(); }
  Seconds time(std::size_t i, std::size_t j) const {
    return time_s[i * points.size() + j];
  }
  double dist(std::size_t i, std::size_t j) const {
    return dist_m[i * points.size() + j];
  }
  bool reachable(std::size_t i, std::size_t j) const {
    return time(i, j) != kUnreachable;
  }

  // Keeps only the listed point indices, in that order.
  CostMatrixSet subset(std::span<const std::size_t> keep) const;
};

/// One single-source search per point. `threads` = 0 uses the
/// FLEETROUTE_THREADS environment variable, else all hardware threads.
/// Output is independent of the worker count.
CostMatrixSet cost_matrices(const ProfiledGraph& g,
                            std::span<const NodeId> points,
                            unsigned threads = 0);

std::string serialize_matrix(const CostMatrixSet& m);
CostMatrixSet parse_matrix(const std::string& text);

// Worker count honoring FLEETROUTE_THREADS; always >= 1.
unsigned default_worker_count();

class SnapFailed : public Error {
 public:
  SnapFailed(const GeoPoint& point, std::optional<double> best_m);

  const GeoPoint& point() const noexcept { return point_; }
  // Distance to the nearest qualifying node regardless of radius, if any.
  std::optional<double> best_candidate_m() const noexcept { return best_m_; }

 private:
  GeoPoint point_;
  std::optional<double> best_m_;
};

struct SnapResult {
  NodeId node = 0;
  double snap_dist_m = 0.0;
};

/// Nearest node with an accessible incident edge in `g`; ties go to the
/// smaller node id. Throws SnapFailed when nothing qualifies within the
/// radius.
SnapResult snap_point(const RoadNetwork& net, const ProfiledGraph& g,
                      const GeoPoint& p, double max_radius_m);

/// Same, but a node qualifies if any of the graphs gives it an accessible
/// incident edge.
SnapResult snap_point(const RoadNetwork& net,
                      std::span<const ProfiledGraph> graphs, const GeoPoint& p,
                      double max_radius_m);

}  // namespace fleetroute
