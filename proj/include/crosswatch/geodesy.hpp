#pragma once

namespace crosswatch {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180]
};

/// Great-circle distance in kilometers (haversine form).
double haversine_km(const GeoPoint& p, const GeoPoint& q);

}  // namespace crosswatch
