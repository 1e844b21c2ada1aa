#include <map>

#include "fleetroute/solver.hpp"
#include "json.hpp"

namespace fleetroute {

using nlohmann::json;

std::string serialize_solution(const ProblemInstance& inst, const Solution& sol,
                               std::span<const ProximityCluster> clusters,
                               const std::string& zone) {
  json trips = json::array();
  for (const auto& trip : sol.trips) {
    json stops = json::array();
    for (const auto s : trip.stops) stops.push_back(inst.customers.at(s).id);
    trips.push_back({{"vehicle_type", inst.fleet.at(trip.vehicle_type).name},
                     {"stops", std::move(stops)},
                     {"load_buckets", trip.load_buckets},
                     {"travel_seconds", trip.travel_seconds}});
  }
  json cluster_list = json::array();
  for (const auto& c : clusters) {
    json members = json::array();
    for (const auto m : c.members) members.push_back(inst.customers.at(m).id);
    cluster_list.push_back({{"id", c.id}, {"members", std::move(members)}});
  }
  json doc;
  doc["zone"] = zone;
  doc["trips"] = std::move(trips);
  doc["travel_seconds"] = sol.travel_seconds;
  doc["trip_count"] = sol.trip_count;
  doc["objective"] = sol.objective;
  doc["penalty_seconds"] = sol.penalty_seconds;
  doc["truncated"] = sol.truncated;
  doc["seed"] = sol.seed;
  doc["diagnostics"] = {{"clusters", std::move(cluster_list)}, {"breaks", sol.breaks}};
  return doc.dump(2) + "\n";
}

Solution parse_solution(const ProblemInstance& inst, const std::string& text) {
  std::map<std::string, std::size_t> customer_index;
  for (std::size_t i = 0; i < inst.customers.size(); ++i) {
    customer_index.emplace(inst.customers[i].id, i);
  }
  std::map<std::string, std::size_t> type_index;
  for (std::size_t t = 0; t < inst.fleet.size(); ++t) type_index.emplace(inst.fleet[t].name, t);

  try {
    const auto doc = json::parse(text);
    Solution sol;
    for (const auto& j : doc.at("trips")) {
      Trip trip;
      const auto type = j.at("vehicle_type").get<std::string>();
      const auto it = type_index.find(type);
      if (it == type_index.end()) throw ParseError("solution: unknown vehicle type '" + type + "'");
      trip.vehicle_type = it->second;
      for (const auto& id : j.at("stops")) {
        const auto c = customer_index.find(id.get<std::string>());
        if (c == customer_index.end()) {
          throw ParseError("solution: unknown customer '" + id.get<std::string>() + "'");
        }
        trip.stops.push_back(c->second);
      }
      trip.load_buckets = j.at("load_buckets").get<int>();
      trip.travel_seconds = j.at("travel_seconds").get<Seconds>();
      sol.trips.push_back(std::move(trip));
    }
    sol.travel_seconds = doc.at("travel_seconds").get<Seconds>();
    sol.trip_count = doc.at("trip_count").get<long long>();
    sol.objective = doc.at("objective").get<Seconds>();
    sol.penalty_seconds = doc.at("penalty_seconds").get<Seconds>();
    sol.truncated = doc.at("truncated").get<bool>();
    sol.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("diagnostics")) sol.breaks = doc["diagnostics"].value("breaks", 0LL);
    return sol;
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution: ") + e.what());
  }
}

}  // namespace fleetroute
