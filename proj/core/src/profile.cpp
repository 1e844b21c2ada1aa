#include <algorithm>
#include <cmath>
#include <set>

#include "fleetroute/osmnet.hpp"
#include "json.hpp"

namespace fleetroute {

using nlohmann::json;

bool VehicleProfile::allows(const std::string& road_class) const {
  const auto it = access.find(road_class);
  return it == access.end() ? default_access : it->second;
}

double VehicleProfile::speed_kmh(const std::string& road_class) const {
  const auto it = speeds.find(road_class);
  return it == speeds.end() ? default_speed_kmh : it->second;
}

Seconds travel_seconds(double length_m, double speed_kmh) {
  // length / (speed * 1000/3600), rearranged to keep integral inputs exact.
  const double seconds = length_m * 3.6 / speed_kmh;
  return std::max<Seconds>(1, static_cast<Seconds>(std::floor(seconds + 0.5)));
}

namespace {

double positive_speed(const json& value, const std::string& field) {
  if (!value.is_number()) {
    throw ValidationError(field + ": speed must be a number");
  }
  const double speed = value.get<double>();
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw ValidationError(field + ": speed must be positive");
  }
  return speed;
}

VehicleProfile profile_from_json(const json& obj, std::size_t index) {
  const std::string where = "profiles[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");

  VehicleProfile profile;
  if (!obj.contains("name") || !obj["name"].is_string() ||
      obj["name"].get<std::string>().empty()) {
    throw ValidationError(where + ".name: missing profile name");
  }
  profile.name = obj["name"].get<std::string>();
  const std::string prefix = "profile '" + profile.name + "'";

  if (obj.contains("speeds")) {
    if (!obj["speeds"].is_object()) {
      throw ValidationError(prefix + " speeds: expected an object");
    }
    for (const auto& [cls, v] : obj["speeds"].items()) {
      profile.speeds[cls] = positive_speed(v, prefix + " speeds." + cls);
    }
  }
  if (obj.contains("access")) {
    if (!obj["access"].is_object()) {
      throw ValidationError(prefix + " access: expected an object");
    }
    for (const auto& [cls, v] : obj["access"].items()) {
      if (!v.is_boolean()) {
        throw ValidationError(prefix + " access." + cls +
                              ": expected a boolean");
      }
      profile.access[cls] = v.get<bool>();
    }
  }
  if (obj.contains("default_access")) {
    if (!obj["default_access"].is_boolean()) {
      throw ValidationError(prefix + " default_access: expected a boolean");
    }
    profile.default_access = obj["default_access"].get<bool>();
  }
  if (obj.contains("default_speed_kmh")) {
    profile.default_speed_kmh =
        positive_speed(obj["default_speed_kmh"], prefix + " default_speed_kmh");
  }
  return profile;
}

}  // namespace

std::vector<VehicleProfile> parse_profiles(std::istream& source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("profiles: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ValidationError("profiles: expected a JSON array");
  }
  if (doc.empty()) throw ValidationError("profiles: document is empty");

  std::vector<VehicleProfile> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto profile = profile_from_json(doc[i], i);
    if (!names.insert(profile.name).second) {
      throw ValidationError("profiles[" + std::to_string(i) +
                            "].name: duplicate profile name '" +
                            profile.name + "'");
    }
    out.push_back(std::move(profile));
  }
  return out;
}

const VehicleProfile& find_profile(std::span<const VehicleProfile> profiles,
                                   const std::string& name) {
  for (const auto& p : profiles) {
    if (p.name == name) return p;
  }
  throw ValidationError("unknown profile '" + name + "'");
}

}  // namespace fleetroute
