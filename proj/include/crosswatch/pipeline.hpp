#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <crosswatch/conflict.hpp>
#include <crosswatch/evaluation.hpp>
#include <crosswatch/homography.hpp>
#include <crosswatch/scenario.hpp>
#include <crosswatch/stream_reader.hpp>
#include <crosswatch/tracker.hpp>

namespace crosswatch {

/// Every tunable of the engine, loadable from one JSON config file.
struct PipelineConfig {
  TrackerConfig tracker;
  ConflictConfig conflict;
  double fps = 30.0;
  double stall_px = 2.0;
  std::size_t queue_capacity = 64;  // parse-ahead bound, frames
  double min_confidence = 0.0;
  int frame_tolerance = 60;  // event-to-truth matching window
  std::uint64_t seed = 0;
};

/// Parses and validates a config file. Unknown keys are rejected; numeric
/// constraints of the constituent types are enforced. Throws
/// std::invalid_argument with a field-level message.
PipelineConfig load_pipeline_config(std::istream& in);
PipelineConfig load_pipeline_config_file(const std::string& path);

/// Applies one sweep override addressed by config key (e.g.
/// "match_threshold", "conflict.min_angle_deg"). Throws on unknown keys.
void apply_override(PipelineConfig& config, const std::string& key,
                    double value);

/// Tracking plus optional conflict detection for one stream, frame by
/// frame. Events are returned per processed frame, as soon as they are
/// determined.
class Pipeline {
 public:
  Pipeline(const PipelineConfig& config,
           std::optional<Homography> calibration);

  std::vector<ConflictEvent> process(const FrameDetections& frame);

  const MultiObjectTracker& tracker() const { return tracker_; }

 private:
  MultiObjectTracker tracker_;
  std::optional<ConflictDetector> detector_;
};

struct RunStats {
  std::size_t frames = 0;
  std::size_t events = 0;
  double seconds = 0.0;
  ReaderStats reader;

  double frames_per_second() const {
    return seconds > 0.0 ? static_cast<double>(frames) / seconds : 0.0;
  }
};

using EventSink = std::function<void(const ConflictEvent&)>;
using TrackSink = std::function<void(std::int64_t frame, const Track&)>;

/// Runs pre-parsed frames through the pipeline synchronously.
RunStats run_frames(std::span<const FrameDetections> frames,
                    const PipelineConfig& config,
                    const std::optional<Homography>& calibration,
                    const TrackSink& track_sink, const EventSink& event_sink);

/// Streams a detection file through the pipeline. Parsing runs on its own
/// thread, ahead of tracking by at most `config.queue_capacity` frames;
/// sinks fire in frame order on the consumer side.
RunStats run_stream(std::istream& in, const PipelineConfig& config,
                    const std::optional<Homography>& calibration,
                    const TrackSink& track_sink, const EventSink& event_sink);

/// One line per live track per frame: frame,id,class,x,y,w,h,status.
void write_track_dump_line(std::ostream& out, std::int64_t frame,
                           const Track& track);

/// Renders and evaluates one scenario at this config. Events observed are
/// appended to `events_out` when provided.
EvaluationReport evaluate_scenario(const Scenario& scenario,
                                   const PipelineConfig& config,
                                   std::vector<ConflictEvent>* events_out = nullptr);

/// Evaluates a whole suite and returns (per-scenario reports, aggregate).
std::pair<std::vector<EvaluationReport>, EvaluationReport> evaluate_suite(
    std::span<const Scenario> suite, const PipelineConfig& config);

/// Sweep runner bound to a scenario suite: applies the overrides, runs the
/// suite, returns the aggregate report.
SweepRunner make_suite_runner(std::vector<Scenario> suite,
                              PipelineConfig base_config);

}  // namespace crosswatch
