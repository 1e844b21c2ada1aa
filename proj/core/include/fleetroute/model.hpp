#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fleetroute/geo.hpp"
#include "fleetroute/osmnet.hpp"

namespace fleetroute {

struct Customer {
  std::string id;
  GeoPoint location;
  int buckets = 1;
  std::string zone;
  std::optional<std::string> phone;
  // Months with service, when the source table carries it. Not used by the
  // optimizer.
  std::optional<double> service_months;
};

enum class FacilityKind { depot, focal_point };

struct Facility {
  std::string id;
  GeoPoint location;
  FacilityKind kind = FacilityKind::depot;
};

struct VehicleTypeSpec {
  std::string name;
  int capacity_buckets = 1;
  std::string profile;
  int count = 1;
};

struct RowError {
  std::size_t row = 0;  // 1-based line number in the source, header = 1
  std::string message;
};

template <typename T>
struct LoadResult {
  std::vector<T> items;
  std::vector<RowError> errors;
};

/// Reads customers.csv (`id,lat,lon,buckets,zone,phone`; columns located by
/// header name, extra columns ignored). Bad rows are reported and skipped;
/// more than 10% bad rows throws ValidationError.
LoadResult<Customer> load_customers(std::istream& source);

/// Reads facilities.csv (`id,lat,lon,kind`). Any bad row throws.
std::vector<Facility> load_facilities(std::istream& source);

/// Reads fleet.json and checks every referenced profile is declared.
std::vector<VehicleTypeSpec> load_fleet(std::istream& source,
                                        std::span<const VehicleProfile> profiles);

struct SnapRecord {
  std::string id;
  NodeId node = 0;
  double snap_dist_m = 0.0;
};

struct Exclusion {
  std::string id;
  std::string reason;
};

/// A solvable problem: matrix index 0 is the depot, index i > 0 is
/// customers[i - 1], identically for every profile. Immutable once built.
struct ProblemInstance {
  Facility depot;
  SnapRecord depot_snap;
  std::vector<Customer> customers;
  std::vector<SnapRecord> customer_snaps;
  std::vector<Facility> focal_points;
  std::vector<VehicleTypeSpec> fleet;
  std::map<std::string, CostMatrixSet> matrices;
  std::vector<Exclusion> excluded;

  std::size_t customer_count() const noexcept { return customers.size(); }
  const CostMatrixSet& matrix_for(const VehicleTypeSpec& type) const {
    return matrices.at(type.profile);
  }
  int max_capacity() const;
  long long total_buckets() const;
  // ceil(total buckets / max capacity), at least 1.
  long long min_trips_lower_bound() const;

  /// Instance restricted to the given customer indices (depot kept).
  ProblemInstance restricted_to(std::span<const std::size_t> customer_indices) const;
};

/// Snaps every location (once, against the union of the fleet's profile
/// graphs), computes one matrix per distinct fleet profile and excludes
/// customers that cannot be snapped or round-tripped by any profile.
/// Throws SnapFailed when the depot cannot be snapped and ValidationError
/// unless there is exactly one depot.
ProblemInstance build_instance(const RoadNetwork& net,
                               std::span<const VehicleProfile> profiles,
                               std::span<const Customer> customers,
                               std::span<const Facility> facilities,
                               std::span<const VehicleTypeSpec> fleet,
                               double snap_radius_m, unsigned threads = 0);

enum class Severity { warning, fatal };

struct Finding {
  Severity severity = Severity::warning;
  std::string customer_id;
  std::string message;
};

std::vector<Finding> validate_instance(const ProblemInstance& inst,
                                       double snap_warn_m = 50.0);

bool has_fatal(std::span<const Finding> findings);

std::string serialize_instance(const ProblemInstance& inst);
ProblemInstance parse_instance(const std::string& text);

}  // namespace fleetroute
