#include "fleetroute/model.hpp"
#include "json_io.hpp"

namespace fleetroute {

using nlohmann::json;

namespace detail {
namespace {

json point_json(const GeoPoint& p) { return json{{"lat", p.lat}, {"lon", p.lon}}; }

GeoPoint point_from(const json& j) {
  return {j.at("lat").get<double>(), j.at("lon").get<double>()};
}

json snap_json(const SnapRecord& s) {
  return json{{"id", s.id}, {"node", s.node}, {"snap_dist_m", s.snap_dist_m}};
}

SnapRecord snap_from(const json& j) {
  return {j.at("id").get<std::string>(), j.at("node").get<NodeId>(),
          j.at("snap_dist_m").get<double>()};
}

json facility_json(const Facility& f) {
  return json{{"id", f.id},
              {"location", point_json(f.location)},
              {"kind", f.kind == FacilityKind::depot ? "depot" : "focal_point"}};
}

Facility facility_from(const json& j) {
  return {j.at("id").get<std::string>(), point_from(j.at("location")),
          j.at("kind").get<std::string>() == "depot" ? FacilityKind::depot
                                                     : FacilityKind::focal_point};
}

}  // namespace

json instance_to_json(const ProblemInstance& inst) {
  json doc;
  doc["depot"] = facility_json(inst.depot);
  doc["depot_snap"] = snap_json(inst.depot_snap);
  json customers = json::array();
  for (const auto& c : inst.customers) {
    json j{{"id", c.id},
           {"location", point_json(c.location)},
           {"buckets", c.buckets},
           {"zone", c.zone}};
    j["phone"] = c.phone ? json(*c.phone) : json(nullptr);
    j["service_months"] = c.service_months ? json(*c.service_months) : json(nullptr);
    customers.push_back(std::move(j));
  }
  doc["customers"] = std::move(customers);
  json snaps = json::array();
  for (const auto& s : inst.customer_snaps) snaps.push_back(snap_json(s));
  doc["customer_snaps"] = std::move(snaps);
  json focal = json::array();
  for (const auto& f : inst.focal_points) focal.push_back(facility_json(f));
  doc["focal_points"] = std::move(focal);
  json fleet = json::array();
  for (const auto& t : inst.fleet) {
    fleet.push_back({{"name", t.name},
                     {"capacity_buckets", t.capacity_buckets},
                     {"profile", t.profile},
                     {"count", t.count}});
  }
  doc["fleet"] = std::move(fleet);
  json matrices = json::object();
  for (const auto& [name, m] : inst.matrices) matrices[name] = matrix_to_json(m);
  doc["matrices"] = std::move(matrices);
  json excluded = json::array();
  for (const auto& e : inst.excluded) {
    excluded.push_back({{"id", e.id}, {"reason", e.reason}});
  }
  doc["excluded"] = std::move(excluded);
  return doc;
}

ProblemInstance instance_from_json(const json& doc) {
  ProblemInstance inst;
  inst.depot = facility_from(doc.at("depot"));
  inst.depot_snap = snap_from(doc.at("depot_snap"));
  for (const auto& j : doc.at("customers")) {
    Customer c;
    c.id = j.at("id").get<std::string>();
    c.location = point_from(j.at("location"));
    c.buckets = j.at("buckets").get<int>();
    c.zone = j.at("zone").get<std::string>();
    if (j.contains("phone") && !j["phone"].is_null()) c.phone = j["phone"].get<std::string>();
    if (j.contains("service_months") && !j["service_months"].is_null()) {
      c.service_months = j["service_months"].get<double>();
    }
    inst.customers.push_back(std::move(c));
  }
  for (const auto& j : doc.at("customer_snaps")) inst.customer_snaps.push_back(snap_from(j));
  for (const auto& j : doc.at("focal_points")) inst.focal_points.push_back(facility_from(j));
  for (const auto& j : doc.at("fleet")) {
    inst.fleet.push_back({j.at("name").get<std::string>(), j.at("capacity_buckets").get<int>(),
                          j.at("profile").get<std::string>(), j.at("count").get<int>()});
  }
  for (const auto& [name, m] : doc.at("matrices").items()) {
    inst.matrices.emplace(name, matrix_from_json(m));
  }
  for (const auto& j : doc.at("excluded")) {
    inst.excluded.push_back({j.at("id").get<std::string>(), j.at("reason").get<std::string>()});
  }
  return inst;
}

}  // namespace detail

std::string serialize_instance(const ProblemInstance& inst) {
  return detail::instance_to_json(inst).dump();
}

ProblemInstance parse_instance(const std::string& text) {
  try {
    return detail::instance_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

}  // namespace fleetroute
