#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include <crosswatch/costs.hpp>
#include <crosswatch/detection.hpp>
#include <crosswatch/kalman.hpp>

namespace crosswatch {

enum class TrackStatus { kTentative, kConfirmed, kDeleted };

struct HistoryPoint {
  std::int64_t frame = 0;
  double x = 0.0;
  double y = 0.0;
};

/// One persistent identity: filtered box state, class label, smoothed
/// appearance, lifecycle counters and a bounded center history.
struct Track {
  int id = 0;
  ClassLabel label = ClassLabel::kVehicle;
  BoxKalmanFilter filter;
  std::optional<AppearanceHistogram> histogram;
  int hits = 0;
  std::int64_t misses = 0;
  TrackStatus status = TrackStatus::kTentative;
  std::deque<HistoryPoint> history;
  HistoryPoint first_observed;

  BoundingBox box() const { return filter.box(); }
};

struct TrackerConfig {
  CostWeights weights{};
  double match_threshold = 0.6;  // dissimilarity gate for accepting a match
  int min_hits = 3;              // associations before a track is confirmed
  int max_age = 10;              // consecutive misses tolerated before deletion
  double histogram_smoothing = 0.9;  // fraction of the running histogram kept
  std::size_t history_capacity = 30;
  BoxKalmanFilter::Params kalman{};
};

struct Match {
  int track_id = 0;
  int detection_index = 0;
  double cost = 0.0;
};

struct AssociationResult {
  std::vector<Match> matches;
  std::vector<int> unmatched_tracks;      // track ids
  std::vector<int> unmatched_detections;  // indices into the frame
};

/// Assigns detections to predicted tracks by minimizing the summed
/// dissimilarity. Only same-class pairs are eligible; assigned pairs whose
/// cost exceeds `match_threshold` are demoted to unmatched on both sides.
AssociationResult associate(const std::vector<Track>& tracks,
                            const FrameDetections& frame,
                            const CostWeights& weights,
                            double match_threshold);

/// Frame-ordered multi-object tracker: predict, associate, update, manage
/// track lifecycle.
class MultiObjectTracker {
 public:
  explicit MultiObjectTracker(TrackerConfig config = {});

  struct StepResult {
    std::vector<int> new_track_ids;
    std::vector<int> deleted_track_ids;
  };

  /// Processes one frame batch. Frames must arrive in increasing order;
  /// gaps are allowed and age all tracks by the gap length.
  StepResult step(const FrameDetections& frame);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::vector<const Track*> confirmed_tracks() const;
  const TrackerConfig& config() const { return config_; }
  std::int64_t last_frame() const { return last_frame_; }

 private:
  void append_history(Track& track, std::int64_t frame);

  TrackerConfig config_;
  std::vector<Track> tracks_;
  int next_id_ = 1;
  std::int64_t last_frame_ = -1;
  bool started_ = false;
};

}  // namespace crosswatch
