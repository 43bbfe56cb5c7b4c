#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <crosswatch/homography.hpp>
#include <crosswatch/speed.hpp>
#include <crosswatch/tracker.hpp>

namespace crosswatch {

struct ConflictConfig {
  double proximity_scale = 1.5;   // center-distance gate, in mean box diagonals
  double min_angle_deg = 35.0;    // minimum approach angle
  double min_speed_kmh = 10.0;    // minimum windowed speed to count as moving
  double drop_fraction = 0.5;     // fractional speed drop that flags a conflict
  int recent_frames = 5;          // trailing frames excluded from the pre-drop mean
  int motion_window = 30;         // shared motion window (frames)
  int cooldown_frames = 60;       // per-pair re-report suppression
  bool angle_from_window = false; // heading from the motion window instead of
                                  // the first observation
};

enum class ConflictType { kVehicleVehicle, kVehiclePedestrian, kVehicleBicycle };
enum class Severity { kAccident, kNearAccident };

std::string_view to_string(ConflictType type);
std::string_view to_string(Severity severity);

struct ConflictEvent {
  std::int64_t frame = 0;
  double px = 0.0;  // pair midpoint, pixels
  double py = 0.0;
  GeoPoint geo;
  ConflictType type = ConflictType::kVehicleVehicle;
  Severity severity = Severity::kNearAccident;
  std::pair<int, int> participants{0, 0};  // track ids, ascending
  double angle_deg = 0.0;
  std::pair<double, double> speeds_before{0.0, 0.0};  // km/h, participant order
  std::pair<double, double> speeds_after{0.0, 0.0};
};

void serialize(const ConflictEvent& event, std::ostream& out);

/// Conflict type for a class pair; nullopt when no vehicle is involved
/// (those pairs are never reported).
std::optional<ConflictType> classify_pair(ClassLabel a, ClassLabel b);

/// Pairs whose boxes overlap or whose centers are closer than
/// `proximity_scale` times the mean of the two box diagonals.
std::vector<std::pair<const Track*, const Track*>> close_pairs(
    std::span<const Track* const> tracks, double proximity_scale);

/// Undirected angle between the two motion directions, in [0, 180) degrees.
/// Computed from the vectors so vertical motion and perpendicularity are
/// well-defined. Throws std::invalid_argument when either displacement is
/// zero.
double approach_angle_deg(double dx_a, double dy_a, double dx_b, double dy_b);

/// True when the mean speed over the series excluding the trailing
/// `recent_frames` entries was at least `min_speed` and the latest estimate
/// fell to (1 - drop_fraction) of that mean or below. Insufficient data
/// yields false.
bool speed_drop(std::span<const double> speeds_kmh, double drop_fraction,
                int recent_frames, double min_speed);

/// Per-stream conflict analyzer: owns the per-track speed series and the
/// per-pair cooldown table. Feed it every processed frame, in order.
class ConflictDetector {
 public:
  ConflictDetector(ConflictConfig config, Homography calibration, double fps,
                   double stall_px);

  /// Analyzes the tracker state after `step` for one frame and returns the
  /// conflicts detected at that frame.
  std::vector<ConflictEvent> on_frame(std::int64_t frame,
                                      const MultiObjectTracker& tracker);

  const ConflictConfig& config() const { return config_; }

 private:
  struct PairGate {
    double angle_deg = 0.0;
  };

  double pre_drop_mean(const std::deque<double>& series) const;
  std::optional<double> heading_angle(const Track& a, const Track& b) const;

  ConflictConfig config_;
  Homography calibration_;
  double fps_;
  double stall_px_;
  std::map<int, std::deque<double>> speed_series_;
  std::map<std::pair<int, int>, std::int64_t> last_reported_;
};

}  // namespace crosswatch
