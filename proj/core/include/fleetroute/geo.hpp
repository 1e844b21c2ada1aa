#pragma once

namespace fleetroute {

// Mean earth radius (IUGG), meters.
inline constexpr double kEarthRadiusM = 6371008.8;

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool in_bounds(const GeoPoint& p) noexcept;

// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b) noexcept;

}  // namespace fleetroute
