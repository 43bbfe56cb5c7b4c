#include <crosswatch/conflict.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace crosswatch {

std::string_view to_string(ConflictType type) {
  switch (type) {
    case ConflictType::kVehicleVehicle: return "V2V";
    case ConflictType::kVehiclePedestrian: return "V2P";
    case ConflictType::kVehicleBicycle: return "V2B";
  }
  return "V2V";
}

std::string_view to_string(Severity severity) {
  return severity == Severity::kAccident ? "accident" : "near_accident";
}

void serialize(const ConflictEvent& event, std::ostream& out) {
  nlohmann::ordered_json rec;
  rec["frame"] = event.frame;
  rec["x"] = event.px;
  rec["y"] = event.py;
  rec["lat"] = event.geo.lat;
  rec["lon"] = event.geo.lon;
  rec["type"] = to_string(event.type);
  rec["severity"] = to_string(event.severity);
  rec["participants"] = {event.participants.first, event.participants.second};
  rec["angle_deg"] = event.angle_deg;
  rec["speeds_before"] = {event.speeds_before.first, event.speeds_before.second};
  rec["speeds_after"] = {event.speeds_after.first, event.speeds_after.second};
  out << rec.dump() << '\n';
}

std::optional<ConflictType> classify_pair(ClassLabel a, ClassLabel b) {
  const int vehicles = (a == ClassLabel::kVehicle) + (b == ClassLabel::kVehicle);
  if (vehicles == 0) return std::nullopt;
  if (vehicles == 2) return ConflictType::kVehicleVehicle;
  const ClassLabel other = a == ClassLabel::kVehicle ? b : a;
  return other == ClassLabel::kPedestrian ? ConflictType::kVehiclePedestrian
                                          : ConflictType::kVehicleBicycle;
}

std::vector<std::pair<const Track*, const Track*>> close_pairs(
    std::span<const Track* const> tracks, double proximity_scale) {
  std::vector<std::pair<const Track*, const Track*>> pairs;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const auto box_i = tracks[i]->box();
    for (std::size_t j = i + 1; j < tracks.size(); ++j) {
      const auto box_j = tracks[j]->box();
      if (iou(box_i, box_j) > 0.0) {
        pairs.emplace_back(tracks[i], tracks[j]);
        continue;
      }
      const double dist = std::hypot(box_i.x - box_j.x, box_i.y - box_j.y);
      const double mean_diag = 0.5 * (box_i.diagonal() + box_j.diagonal());
      if (dist < proximity_scale * mean_diag)
        pairs.emplace_back(tracks[i], tracks[j]);
    }
  }
  return pairs;
}

double approach_angle_deg(double dx_a, double dy_a, double dx_b, double dy_b) {
  if ((dx_a == 0.0 && dy_a == 0.0) || (dx_b == 0.0 && dy_b == 0.0))
    throw std::invalid_argument("zero displacement: direction undefined");
  const double cross = dx_a * dy_b - dy_a * dx_b;
  const double dot = dx_a * dx_b + dy_a * dy_b;
  // Undirected lines: fold antiparallel onto parallel.
  const double angle = std::atan2(std::abs(cross), std::abs(dot));
  return angle * 180.0 / std::numbers::pi;
}

bool speed_drop(std::span<const double> speeds_kmh, double drop_fraction,
                int recent_frames, double min_speed) {
  const auto n = static_cast<int>(speeds_kmh.size());
  if (n < 2 || n <= recent_frames) return false;
  double mean = 0.0;
  const int pre = n - recent_frames;
  for (int i = 0; i < pre; ++i) mean += speeds_kmh[i];
  mean /= pre;
  if (mean < min_speed) return false;
  return speeds_kmh[n - 1] <= (1.0 - drop_fraction) * mean;
}

ConflictDetector::ConflictDetector(ConflictConfig config,
                                   Homography calibration, double fps,
                                   double stall_px)
    : config_(config),
      calibration_(calibration),
      fps_(fps),
      stall_px_(stall_px) {}

double ConflictDetector::pre_drop_mean(const std::deque<double>& series) const {
  const auto n = static_cast<int>(series.size());
  const int pre = n - config_.recent_frames;
  if (pre <= 0) return 0.0;
  double mean = 0.0;
  for (int i = 0; i < pre; ++i) mean += series[i];
  return mean / pre;
}

std::optional<double> ConflictDetector::heading_angle(const Track& a,
                                                      const Track& b) const {
  double ax0 = a.first_observed.x, ay0 = a.first_observed.y;
  double bx0 = b.first_observed.x, by0 = b.first_observed.y;
  if (config_.angle_from_window) {
    const auto window_start = [&](const Track& t) {
      const std::size_t w = static_cast<std::size_t>(config_.motion_window);
      const std::size_t idx =
          t.history.size() > w ? t.history.size() - w : 0;
      return t.history[idx];
    };
    const auto sa = window_start(a);
    const auto sb = window_start(b);
    ax0 = sa.x;
    ay0 = sa.y;
    bx0 = sb.x;
    by0 = sb.y;
  }
  const auto pa = a.history.back();
  const auto pb = b.history.back();
  try {
    return approach_angle_deg(pa.x - ax0, pa.y - ay0, pb.x - bx0, pb.y - by0);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::vector<ConflictEvent> ConflictDetector::on_frame(
    std::int64_t frame, const MultiObjectTracker& tracker) {
  const auto confirmed = tracker.confirmed_tracks();

  // Refresh the per-track speed series; prune ids that left the scene.
  std::map<int, std::deque<double>> kept;
  for (const Track* track : confirmed) {
    auto series = std::move(speed_series_[track->id]);
    if (track->history.size() >=
        static_cast<std::size_t>(config_.motion_window)) {
      const auto est = estimate_speed(*track, calibration_,
                                      config_.motion_window, fps_, stall_px_);
      series.push_back(est.speed_kmh);
      while (series.size() > static_cast<std::size_t>(config_.motion_window))
        series.pop_front();
    }
    kept[track->id] = std::move(series);
  }
  speed_series_ = std::move(kept);

  std::vector<ConflictEvent> events;
  for (const auto& [a, b] : close_pairs(confirmed, config_.proximity_scale)) {
    const auto type = classify_pair(a->label, b->label);
    if (!type) continue;

    const std::pair<int, int> key = std::minmax(a->id, b->id);
    const auto reported = last_reported_.find(key);
    if (reported != last_reported_.end() &&
        frame - reported->second < config_.cooldown_frames)
      continue;

    const auto angle = heading_angle(*a, *b);
    if (!angle || *angle < config_.min_angle_deg) continue;

    const auto& series_a = speed_series_[a->id];
    const auto& series_b = speed_series_[b->id];
    const double mean_a = pre_drop_mean(series_a);
    const double mean_b = pre_drop_mean(series_b);
    if (mean_a < config_.min_speed_kmh || mean_b < config_.min_speed_kmh)
      continue;

    // A struck pedestrian's speed profile is unreliable at tracking
    // granularity, so for V2P pairs only the vehicle is tested for the drop.
    const std::vector<double> va(series_a.begin(), series_a.end());
    const std::vector<double> vb(series_b.begin(), series_b.end());
    bool dropped = false;
    if (a->label != ClassLabel::kPedestrian)
      dropped = speed_drop(va, config_.drop_fraction, config_.recent_frames,
                           config_.min_speed_kmh);
    if (!dropped && b->label != ClassLabel::kPedestrian)
      dropped = speed_drop(vb, config_.drop_fraction, config_.recent_frames,
                           config_.min_speed_kmh);
    if (!dropped) continue;

    const auto box_a = a->box();
    const auto box_b = b->box();
    ConflictEvent event;
    event.frame = frame;
    event.px = 0.5 * (box_a.x + box_b.x);
    event.py = 0.5 * (box_a.y + box_b.y);
    event.geo = calibration_.image_to_world(event.px, event.py);
    event.type = *type;
    event.severity = iou(box_a, box_b) > 0.0 ? Severity::kAccident
                                             : Severity::kNearAccident;
    event.angle_deg = *angle;
    const bool a_first = a->id < b->id;
    const Track* first = a_first ? a : b;
    const Track* second = a_first ? b : a;
    event.participants = {first->id, second->id};
    const double mean_first = a_first ? mean_a : mean_b;
    const double mean_second = a_first ? mean_b : mean_a;
    const auto& series_first = a_first ? series_a : series_b;
    const auto& series_second = a_first ? series_b : series_a;
    event.speeds_before = {mean_first, mean_second};
    event.speeds_after = {series_first.empty() ? 0.0 : series_first.back(),
                          series_second.empty() ? 0.0 : series_second.back()};
    events.push_back(event);
    last_reported_[key] = frame;
  }
  return events;
}

}  // namespace crosswatch
