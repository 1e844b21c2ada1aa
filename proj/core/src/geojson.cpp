#include <set>

#include "fleetroute/export.hpp"
#include "json_io.hpp"

namespace fleetroute {

using nlohmann::json;

const char* trip_color(std::size_t trip_index) {
  return kTripColors[trip_index % std::size(kTripColors)];
}

std::vector<NodeId> RouteGeometry::vertices() const {
  std::vector<NodeId> out;
  for (const auto& leg : legs) {
    for (std::size_t i = 0; i < leg.size(); ++i) {
      if (i == 0 && !out.empty() && out.back() == leg.front()) continue;
      out.push_back(leg[i]);
    }
  }
  return out;
}

std::vector<RouteGeometry> resolve_geometries(const ProblemInstance& inst,
                                              const Solution& sol,
                                              std::span<const ProfiledGraph> graphs) {
  std::vector<RouteGeometry> out;
  for (std::size_t r = 0; r < sol.trips.size(); ++r) {
    const auto& trip = sol.trips[r];
    const auto& profile = inst.fleet.at(trip.vehicle_type).profile;
    const ProfiledGraph* graph = nullptr;
    for (const auto& g : graphs) {
      if (g.profile().name == profile) graph = &g;
    }
    if (graph == nullptr) throw ExportError("no graph for profile '" + profile + "'");

    RouteGeometry geo;
    geo.trip = r;
    NodeId prev = inst.depot_snap.node;
    for (std::size_t k = 0; k <= trip.stops.size(); ++k) {
      const NodeId next = k < trip.stops.size()
                              ? inst.customer_snaps.at(trip.stops[k]).node
                              : inst.depot_snap.node;
      auto path = shortest_path(*graph, prev, next);
      if (!path.reachable) {
        throw ExportError("trip " + std::to_string(r) + " leg " + std::to_string(k) +
                          ": no path on profile '" + profile + "'");
      }
      geo.dist_m += path.dist_m;
      geo.time_s += path.time_s;
      geo.legs.push_back(std::move(path.nodes));
      prev = next;
    }
    out.push_back(std::move(geo));
  }
  return out;
}

namespace {

json lonlat(const GeoPoint& p) {
  return json::array({detail::round6(p.lon), detail::round6(p.lat)});
}

json point_feature(const GeoPoint& p, json properties) {
  return {{"type", "Feature"},
          {"geometry", {{"type", "Point"}, {"coordinates", lonlat(p)}}},
          {"properties", std::move(properties)}};
}

}  // namespace

std::string routes_to_geojson(const ProblemInstance& inst, const Solution& sol,
                              std::span<const RouteGeometry> geometries,
                              const RoadNetwork& net, const std::string& zone) {
  json features = json::array();
  for (std::size_t r = 0; r < sol.trips.size(); ++r) {
    const auto& trip = sol.trips[r];
    const RouteGeometry* geo = nullptr;
    for (const auto& g : geometries) {
      if (g.trip == r) geo = &g;
    }
    if (geo == nullptr || geo->legs.size() != trip.stops.size() + 1) {
      throw ExportError("trip " + std::to_string(r) + ": missing leg geometry");
    }
    for (std::size_t k = 0; k < geo->legs.size(); ++k) {
      if (geo->legs[k].empty()) {
        throw ExportError("trip " + std::to_string(r) + " leg " + std::to_string(k) +
                          ": empty geometry");
      }
    }
    json coords = json::array();
    for (const auto id : geo->vertices()) {
      const auto it = net.nodes.find(id);
      if (it == net.nodes.end()) {
        throw ExportError("trip " + std::to_string(r) + ": node " + std::to_string(id) +
                          " missing from network");
      }
      coords.push_back(lonlat(it->second));
    }
    if (coords.size() == 1) coords.push_back(coords.front());
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
         {"properties",
          {{"kind", "trip"},
           {"trip", r + 1},
           {"vehicle_type", inst.fleet.at(trip.vehicle_type).name},
           {"color", trip_color(r)},
           {"zone", zone},
           {"stops", trip.stops.size()},
           {"load_buckets", trip.load_buckets},
           {"travel_seconds", trip.travel_seconds},
           {"dist_m", detail::round6(geo->dist_m)}}}});
  }

  for (std::size_t r = 0; r < sol.trips.size(); ++r) {
    const auto& trip = sol.trips[r];
    for (std::size_t k = 0; k < trip.stops.size(); ++k) {
      const auto& c = inst.customers.at(trip.stops[k]);
      features.push_back(point_feature(
          c.location, {{"kind", "customer"},
                       {"id", c.id},
                       {"phone", c.phone ? json(*c.phone) : json(nullptr)},
                       {"order", k + 1},
                       {"trip", r + 1},
                       {"buckets", c.buckets},
                       {"zone", c.zone.empty() ? zone : c.zone},
                       {"color", trip_color(r)}}));
    }
  }

  // The depot marker sits on its road node so every trip line starts and
  // ends exactly on it.
  const auto depot_node = net.nodes.find(inst.depot_snap.node);
  const GeoPoint depot_at =
      depot_node == net.nodes.end() ? inst.depot.location : depot_node->second;
  features.push_back(point_feature(
      depot_at, {{"kind", "depot"}, {"id", inst.depot.id}, {"gps", lonlat(inst.depot.location)}}));
  for (const auto& f : inst.focal_points) {
    features.push_back(point_feature(f.location, {{"kind", "focal_point"}, {"id", f.id}}));
  }

  json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump() + "\n";
}

std::string merge_geojson(std::span<const std::string> documents) {
  json routes = json::array();
  json customers = json::array();
  json facilities = json::array();
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& text : documents) {
    const auto doc = json::parse(text);
    for (const auto& f : doc.at("features")) {
      const auto kind = f.at("properties").value("kind", std::string());
      if (kind == "trip") {
        routes.push_back(f);
      } else if (kind == "customer") {
        customers.push_back(f);
      } else if (seen.emplace(kind, f.at("properties").value("id", std::string())).second) {
        facilities.push_back(f);
      }
    }
  }
  json features = json::array();
  for (auto* group : {&routes, &customers, &facilities}) {
    for (auto& f : *group) features.push_back(std::move(f));
  }
  json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump() + "\n";
}

}  // namespace fleetroute
