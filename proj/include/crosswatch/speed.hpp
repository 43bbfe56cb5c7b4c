#pragma once

#include <span>

#include <crosswatch/geodesy.hpp>
#include <crosswatch/homography.hpp>
#include <crosswatch/tracker.hpp>

namespace crosswatch {

struct SpeedEstimate {
  double speed_kmh = 0.0;
  int window = 0;      // number of history entries used
  GeoPoint p;          // first-half average, world frame
  GeoPoint q;          // second-half average, world frame
  bool stalled = false;
};

/// World-frame speed over the most recent `window` history entries. The
/// image centers of the first floor(window/2) and last ceil(window/2)
/// entries are averaged into two points; when those averages are closer
/// than `stall_px` pixels the track counts as stalled and reports 0.
/// Throws std::invalid_argument when the history is shorter than `window`.
SpeedEstimate estimate_speed(std::span<const HistoryPoint> history,
                             const Homography& calibration, int window,
                             double fps, double stall_px);

SpeedEstimate estimate_speed(const Track& track, const Homography& calibration,
                             int window, double fps, double stall_px);

}  // namespace crosswatch
