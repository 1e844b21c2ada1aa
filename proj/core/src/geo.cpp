#include "fleetroute/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fleetroute {

bool in_bounds(const GeoPoint& p) noexcept {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double s = std::sin(dlat / 2.0);
  const double t = std::sin(dlon / 2.0);
  const double h =
      s * s + std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * t * t;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace fleetroute
