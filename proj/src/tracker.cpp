#include <crosswatch/tracker.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <crosswatch/hungarian.hpp>

namespace crosswatch {

namespace {

// Stand-in for the +inf sentinel when feeding the assignment solver; far
// above any admissible dissimilarity so such pairs are always demoted.
constexpr double kBlockedCost = 1e9;

}  // namespace

AssociationResult associate(const std::vector<Track>& tracks,
                            const FrameDetections& frame,
                            const CostWeights& weights,
                            double match_threshold) {
  const auto& dets = frame.detections;
  AssociationResult result;

  const int n = static_cast<int>(tracks.size());
  const int m = static_cast<int>(dets.size());
  if (n == 0 || m == 0) {
    for (const auto& t : tracks) result.unmatched_tracks.push_back(t.id);
    for (int j = 0; j < m; ++j) result.unmatched_detections.push_back(j);
    return result;
  }

  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd cost(n, m);
  for (int i = 0; i < n; ++i) {
    const auto track_box = tracks[i].box();
    for (int j = 0; j < m; ++j) {
      cost(i, j) = tracks[i].label == dets[j].label
                       ? total_cost(track_box, tracks[i].histogram, dets[j],
                                    weights)
                       : inf;
    }
  }

  Eigen::MatrixXd solver_cost =
      cost.unaryExpr([&](double c) { return std::isfinite(c) ? c : kBlockedCost; });
  const auto assignment = hungarian_assign(solver_cost);

  std::vector<char> track_matched(n, 0), det_matched(m, 0);
  for (const auto& [i, j] : assignment) {
    const double c = cost(i, j);
    if (!std::isfinite(c) || c > match_threshold) continue;
    result.matches.push_back({tracks[i].id, j, c});
    track_matched[i] = 1;
    det_matched[j] = 1;
  }
  for (int i = 0; i < n; ++i)
    if (!track_matched[i]) result.unmatched_tracks.push_back(tracks[i].id);
  for (int j = 0; j < m; ++j)
    if (!det_matched[j]) result.unmatched_detections.push_back(j);
  return result;
}

MultiObjectTracker::MultiObjectTracker(TrackerConfig config)
    : config_(std::move(config)) {}

void MultiObjectTracker::append_history(Track& track, std::int64_t frame) {
  const auto box = track.box();
  track.history.push_back({frame, box.x, box.y});
  while (track.history.size() > config_.history_capacity)
    track.history.pop_front();
}

std::vector<const Track*> MultiObjectTracker::confirmed_tracks() const {
  std::vector<const Track*> out;
  for (const auto& t : tracks_)
    if (t.status == TrackStatus::kConfirmed) out.push_back(&t);
  return out;
}

MultiObjectTracker::StepResult MultiObjectTracker::step(
    const FrameDetections& frame) {
  if (started_ && frame.frame <= last_frame_)
    throw std::invalid_argument("out-of-order frame " +
                                std::to_string(frame.frame));
  const std::int64_t advance = started_ ? frame.frame - last_frame_ : 1;

  for (auto& track : tracks_)
    for (std::int64_t k = 0; k < advance; ++k) track.filter.predict();

  const auto assoc =
      associate(tracks_, frame, config_.weights, config_.match_threshold);

  StepResult result;

  for (const auto& match : assoc.matches) {
    auto it = std::find_if(tracks_.begin(), tracks_.end(),
                           [&](const Track& t) { return t.id == match.track_id; });
    Track& track = *it;
    const Detection& det = frame.detections[match.detection_index];
    track.filter.update(det.box);
    if (det.histogram) {
      if (track.histogram) {
        const double keep = config_.histogram_smoothing;
        auto& bins = track.histogram->bins;
        for (std::size_t b = 0; b < bins.size(); ++b)
          bins[b] = keep * bins[b] + (1.0 - keep) * det.histogram->bins[b];
      } else {
        track.histogram = det.histogram;
      }
    }
    track.hits += 1;
    track.misses = 0;
    if (track.status == TrackStatus::kTentative &&
        track.hits >= config_.min_hits)
      track.status = TrackStatus::kConfirmed;
  }

  for (int id : assoc.unmatched_tracks) {
    auto it = std::find_if(tracks_.begin(), tracks_.end(),
                           [&](const Track& t) { return t.id == id; });
    it->misses += advance;
  }

  for (int j : assoc.unmatched_detections) {
    const Detection& det = frame.detections[j];
    Track track;
    track.id = next_id_++;
    track.label = det.label;
    track.filter = BoxKalmanFilter(det.box, config_.kalman);
    track.histogram = det.histogram;
    track.hits = 1;
    track.misses = 0;
    track.status = config_.min_hits <= 1 ? TrackStatus::kConfirmed
                                         : TrackStatus::kTentative;
    track.first_observed = {frame.frame, det.box.x, det.box.y};
    result.new_track_ids.push_back(track.id);
    tracks_.push_back(std::move(track));
  }

  for (auto it = tracks_.begin(); it != tracks_.end();) {
    if (it->misses > config_.max_age) {
      it->status = TrackStatus::kDeleted;
      result.deleted_track_ids.push_back(it->id);
      it = tracks_.erase(it);
    } else {
      ++it;
    }
  }

  for (auto& track : tracks_) append_history(track, frame.frame);

  last_frame_ = frame.frame;
  started_ = true;
  return result;
}

}  // namespace crosswatch
