#include <crosswatch/speed.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace crosswatch {

SpeedEstimate estimate_speed(std::span<const HistoryPoint> history,
                             const Homography& calibration, int window,
                             double fps, double stall_px) {
  if (window < 2) throw std::invalid_argument("speed window must be >= 2");
  if (history.size() < static_cast<std::size_t>(window))
    throw std::invalid_argument("insufficient history for speed estimate");

  const auto recent = history.subspan(history.size() - window);
  const int first_half = window / 2;
  const int second_half = window - first_half;

  double px = 0.0, py = 0.0, qx = 0.0, qy = 0.0;
  for (int i = 0; i < first_half; ++i) {
    px += recent[i].x;
    py += recent[i].y;
  }
  for (int i = first_half; i < window; ++i) {
    qx += recent[i].x;
    qy += recent[i].y;
  }
  px /= first_half;
  py /= first_half;
  qx /= second_half;
  qy /= second_half;

  SpeedEstimate est;
  est.window = window;
  est.p = calibration.image_to_world(px, py);
  est.q = calibration.image_to_world(qx, qy);

  if (std::hypot(qx - px, qy - py) < stall_px) {
    est.stalled = true;
    est.speed_kmh = 0.0;
    return est;
  }

  const double d_km = haversine_km(est.p, est.q);
  est.speed_kmh = d_km * 3600.0 * fps / static_cast<double>(window);
  return est;
}

SpeedEstimate estimate_speed(const Track& track, const Homography& calibration,
                             int window, double fps, double stall_px) {
  std::vector<HistoryPoint> points(track.history.begin(), track.history.end());
  return estimate_speed(points, calibration, window, fps, stall_px);
}

}  // namespace crosswatch
