#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fleetroute/model.hpp"
#include "fleetroute/osmnet.hpp"
#include "fleetroute/solver.hpp"

namespace fixtures {

using Rng = std::mt19937_64;
using fleetroute::GeoPoint;
using fleetroute::NodeId;
using fleetroute::Seconds;

// Point `north_m` / `east_m` meters from `origin` (flat-earth offset).
GeoPoint offset(const GeoPoint& origin, double north_m, double east_m);

fleetroute::VehicleProfile profile(const std::string& name,
                                   std::map<std::string, double> speeds,
                                   std::vector<std::string> blocked = {});

struct RandomNetworkSpec {
  int nodes = 20;
  int extra_edges = 15;
  std::vector<std::string> classes{"residential"};
  double oneway_probability = 0.0;
  double box_m = 1000.0;
};

/// Random spanning tree plus extra edges; node ids are sparse and shuffled.
fleetroute::RoadNetwork random_network(Rng& rng, const RandomNetworkSpec& spec);

/// rows x cols lattice, ids 1 + r * cols + c, every edge `cls`.
fleetroute::RoadNetwork grid_network(int rows, int cols, double step_m,
                                     const std::string& cls = "residential",
                                     GeoPoint origin = {19.76, -72.20});

// One two-node way per edge; oneway edges carry oneway=yes.
std::string to_osm_xml(const fleetroute::RoadNetwork& net);

/// Instance over explicit matrices. costs[t] is the (n+1)^2 time matrix of
/// vehicle type t (index 0 = depot); kUnreachable marks missing legs.
/// Customers are placed 1 km apart so no proximity clusters form.
fleetroute::ProblemInstance instance_from_costs(
    const std::vector<std::vector<std::vector<Seconds>>>& costs,
    const std::vector<int>& demands, const std::vector<int>& capacities);

struct RandomInstanceSpec {
  int customers = 5;
  std::vector<int> capacities{10};
  int max_demand = 4;
  Seconds max_cost = 100;
  bool symmetric = false;
};

fleetroute::ProblemInstance random_instance(Rng& rng, const RandomInstanceSpec& spec);

/// Customers scattered on a plane with Euclidean-ish travel times, so that
/// nearby customers can cluster. `speed_mps` per vehicle type.
fleetroute::ProblemInstance geometric_instance(Rng& rng, int customers,
                                               const std::vector<int>& capacities,
                                               const std::vector<double>& speed_mps,
                                               int max_demand, double box_m);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Writes network.osm, profiles.json, customers.csv, facilities.csv,
/// fleet.json and run.json for a small town into `dir`. Zone sizes give the
/// number of customers per zone label.
struct TownSpec {
  std::vector<std::pair<std::string, int>> zones{{"Avyasyon", 12}, {"Shada", 9}};
  std::uint64_t seed = 1;
  double time_limit_s = 5.0;
};
std::filesystem::path write_town(const std::filesystem::path& dir, const TownSpec& spec);

/// A fixed 100-customer town for two vehicle types: a grid of residential
/// streets with a primary spine, footway alleys and dead-end footpath
/// pockets that only the slow type can enter. Built through build_instance.
struct Town {
  fleetroute::RoadNetwork net;
  std::vector<fleetroute::VehicleProfile> profiles;
  std::vector<fleetroute::ProfiledGraph> graphs;
  fleetroute::ProblemInstance instance;
};
Town analog_town();

}  // namespace fixtures
