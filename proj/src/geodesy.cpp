#include <crosswatch/geodesy.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace crosswatch {

double haversine_km(const GeoPoint& p, const GeoPoint& q) {
  constexpr double deg = std::numbers::pi / 180.0;
  const double phi_p = p.lat * deg;
  const double phi_q = q.lat * deg;
  const double dphi = (q.lat - p.lat) * deg;
  const double dlambda = (q.lon - p.lon) * deg;

  const double sp = std::sin(0.5 * dphi);
  const double sl = std::sin(0.5 * dlambda);
  const double h = sp * sp + std::cos(phi_p) * std::cos(phi_q) * sl * sl;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(h, 1.0)));
}

}  // namespace crosswatch
