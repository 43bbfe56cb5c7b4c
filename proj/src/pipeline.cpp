#include <crosswatch/pipeline.hpp>

#include <chrono>
#include <exception>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include <crosswatch/bounded_queue.hpp>

namespace crosswatch {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (key == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw std::invalid_argument("config: unknown key \"" + where + key + "\"");
  }
}

void check(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument("config: " + message);
}

}  // namespace

PipelineConfig load_pipeline_config(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  PipelineConfig cfg;
  try {
    reject_unknown_keys(
        doc,
        {"weights", "match_threshold", "min_hits", "max_age",
         "histogram_smoothing", "kalman", "fps", "speed_window", "stall_px",
         "conflict", "queue_capacity", "min_confidence", "frame_tolerance",
         "seed"},
        "");

    if (doc.contains("weights")) {
      const auto& w = doc["weights"];
      reject_unknown_keys(w, {"appearance", "size", "position", "jaccard"},
                          "weights.");
      cfg.tracker.weights = CostWeights::normalized(
          w.value("appearance", 0.25), w.value("size", 0.25),
          w.value("position", 0.25), w.value("jaccard", 0.25));
    }
    cfg.tracker.match_threshold =
        doc.value("match_threshold", cfg.tracker.match_threshold);
    check(cfg.tracker.match_threshold > 0.0, "match_threshold must be > 0");
    cfg.tracker.min_hits = doc.value("min_hits", cfg.tracker.min_hits);
    check(cfg.tracker.min_hits >= 1, "min_hits must be >= 1");
    cfg.tracker.max_age = doc.value("max_age", cfg.tracker.max_age);
    check(cfg.tracker.max_age >= 0, "max_age must be >= 0");
    cfg.tracker.histogram_smoothing =
        doc.value("histogram_smoothing", cfg.tracker.histogram_smoothing);
    check(cfg.tracker.histogram_smoothing >= 0.0 &&
              cfg.tracker.histogram_smoothing <= 1.0,
          "histogram_smoothing must lie in [0,1]");

    if (doc.contains("kalman")) {
      const auto& k = doc["kalman"];
      reject_unknown_keys(
          k,
          {"measurement_xy", "measurement_area", "measurement_aspect",
           "process_observed", "process_velocity_xy", "process_velocity_area",
           "initial_velocity_variance", "area_floor"},
          "kalman.");
      auto& p = cfg.tracker.kalman;
      p.meas_xy = k.value("measurement_xy", p.meas_xy);
      p.meas_s = k.value("measurement_area", p.meas_s);
      p.meas_r = k.value("measurement_aspect", p.meas_r);
      p.process_observed = k.value("process_observed", p.process_observed);
      p.process_vxy = k.value("process_velocity_xy", p.process_vxy);
      p.process_vs = k.value("process_velocity_area", p.process_vs);
      p.initial_velocity_var =
          k.value("initial_velocity_variance", p.initial_velocity_var);
      p.area_floor = k.value("area_floor", p.area_floor);
      check(p.meas_xy > 0.0 && p.meas_s > 0.0 && p.meas_r > 0.0,
            "kalman measurement variances must be > 0");
      check(p.area_floor > 0.0, "kalman.area_floor must be > 0");
    }

    cfg.fps = doc.value("fps", cfg.fps);
    check(cfg.fps > 0.0, "fps must be > 0");
    cfg.conflict.motion_window =
        doc.value("speed_window", cfg.conflict.motion_window);
    check(cfg.conflict.motion_window >= 2, "speed_window must be >= 2");
    cfg.stall_px = doc.value("stall_px", cfg.stall_px);
    check(cfg.stall_px >= 0.0, "stall_px must be >= 0");

    if (doc.contains("conflict")) {
      const auto& c = doc["conflict"];
      reject_unknown_keys(c,
                          {"proximity_scale", "min_angle_deg", "min_speed_kmh",
                           "drop_fraction", "recent_frames", "cooldown_frames",
                           "angle_from_window"},
                          "conflict.");
      auto& cc = cfg.conflict;
      cc.proximity_scale = c.value("proximity_scale", cc.proximity_scale);
      cc.min_angle_deg = c.value("min_angle_deg", cc.min_angle_deg);
      cc.min_speed_kmh = c.value("min_speed_kmh", cc.min_speed_kmh);
      cc.drop_fraction = c.value("drop_fraction", cc.drop_fraction);
      cc.recent_frames = c.value("recent_frames", cc.recent_frames);
      cc.cooldown_frames = c.value("cooldown_frames", cc.cooldown_frames);
      cc.angle_from_window = c.value("angle_from_window", cc.angle_from_window);
      check(cc.proximity_scale > 0.0, "conflict.proximity_scale must be > 0");
      check(cc.min_angle_deg > 0.0 && cc.min_angle_deg < 180.0,
            "conflict.min_angle_deg must lie in (0,180)");
      check(cc.min_speed_kmh > 0.0, "conflict.min_speed_kmh must be > 0");
      check(cc.drop_fraction > 0.0 && cc.drop_fraction < 1.0,
            "conflict.drop_fraction must lie in (0,1)");
      check(cc.recent_frames > 0, "conflict.recent_frames must be > 0");
      check(cc.cooldown_frames > 0, "conflict.cooldown_frames must be > 0");
    }

    cfg.queue_capacity = doc.value("queue_capacity", cfg.queue_capacity);
    check(cfg.queue_capacity >= 1, "queue_capacity must be >= 1");
    cfg.min_confidence = doc.value("min_confidence", cfg.min_confidence);
    check(cfg.min_confidence >= 0.0 && cfg.min_confidence <= 1.0,
          "min_confidence must lie in [0,1]");
    cfg.frame_tolerance = doc.value("frame_tolerance", cfg.frame_tolerance);
    check(cfg.frame_tolerance >= 0, "frame_tolerance must be >= 0");
    cfg.seed = doc.value("seed", cfg.seed);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  // The speed estimator consumes history entries; keep at least one window.
  cfg.tracker.history_capacity =
      std::max<std::size_t>(cfg.conflict.motion_window, 2);
  return cfg;
}

PipelineConfig load_pipeline_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return load_pipeline_config(in);
}

void apply_override(PipelineConfig& config, const std::string& key,
                    double value) {
  if (key == "match_threshold") {
    config.tracker.match_threshold = value;
  } else if (key == "speed_window") {
    config.conflict.motion_window = static_cast<int>(value);
    config.tracker.history_capacity =
        std::max<std::size_t>(config.conflict.motion_window, 2);
  } else if (key == "stall_px") {
    config.stall_px = value;
  } else if (key == "conflict.proximity_scale") {
    config.conflict.proximity_scale = value;
  } else if (key == "conflict.min_angle_deg") {
    config.conflict.min_angle_deg = value;
  } else if (key == "conflict.min_speed_kmh") {
    config.conflict.min_speed_kmh = value;
  } else if (key == "conflict.drop_fraction") {
    config.conflict.drop_fraction = value;
  } else if (key == "conflict.recent_frames") {
    config.conflict.recent_frames = static_cast<int>(value);
  } else if (key == "conflict.cooldown_frames") {
    config.conflict.cooldown_frames = static_cast<int>(value);
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + key);
  }
}

Pipeline::Pipeline(const PipelineConfig& config,
                   std::optional<Homography> calibration)
    : tracker_(config.tracker) {
  if (calibration)
    detector_.emplace(config.conflict, *calibration, config.fps,
                      config.stall_px);
}

std::vector<ConflictEvent> Pipeline::process(const FrameDetections& frame) {
  tracker_.step(frame);
  if (!detector_) return {};
  return detector_->on_frame(frame.frame, tracker_);
}

namespace {

RunStats drive(Pipeline& pipeline,
               const std::function<std::optional<FrameDetections>()>& source,
               const TrackSink& track_sink, const EventSink& event_sink) {
  RunStats stats;
  const auto start = std::chrono::steady_clock::now();
  while (auto frame = source()) {
    const auto events = pipeline.process(*frame);
    ++stats.frames;
    if (track_sink)
      for (const auto& track : pipeline.tracker().tracks())
        track_sink(frame->frame, track);
    if (event_sink)
      for (const auto& event : events) event_sink(event);
    stats.events += events.size();
  }
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return stats;
}

}  // namespace

RunStats run_frames(std::span<const FrameDetections> frames,
                    const PipelineConfig& config,
                    const std::optional<Homography>& calibration,
                    const TrackSink& track_sink, const EventSink& event_sink) {
  Pipeline pipeline(config, calibration);
  std::size_t next = 0;
  auto source = [&]() -> std::optional<FrameDetections> {
    if (next >= frames.size()) return std::nullopt;
    return frames[next++];
  };
  return drive(pipeline, source, track_sink, event_sink);
}

RunStats run_stream(std::istream& in, const PipelineConfig& config,
                    const std::optional<Homography>& calibration,
                    const TrackSink& track_sink, const EventSink& event_sink) {
  Pipeline pipeline(config, calibration);
  BoundedQueue<FrameDetections> queue(config.queue_capacity);
  ReaderStats reader_stats;
  std::exception_ptr reader_error;

  std::thread producer([&] {
    try {
      DetectionStreamReader reader(in, {config.min_confidence});
      while (auto batch = reader.next()) queue.push(std::move(*batch));
      reader_stats = reader.stats();
    } catch (...) {
      reader_error = std::current_exception();
    }
    queue.close();
  });

  auto source = [&]() -> std::optional<FrameDetections> { return queue.pop(); };
  RunStats stats = drive(pipeline, source, track_sink, event_sink);
  producer.join();
  if (reader_error) std::rethrow_exception(reader_error);
  stats.reader = reader_stats;
  return stats;
}

void write_track_dump_line(std::ostream& out, std::int64_t frame,
                           const Track& track) {
  const auto box = track.box();
  const char* status = track.status == TrackStatus::kConfirmed ? "confirmed"
                       : track.status == TrackStatus::kTentative
                           ? "tentative"
                           : "deleted";
  out << frame << ',' << track.id << ',' << to_string(track.label) << ','
      << box.x << ',' << box.y << ',' << box.w << ',' << box.h << ','
      << status << '\n';
}

EvaluationReport evaluate_scenario(const Scenario& scenario,
                                   const PipelineConfig& config,
                                   std::vector<ConflictEvent>* events_out) {
  const auto frames = render(scenario);
  std::vector<ConflictEvent> events;
  run_frames(frames, config, synthetic_world_homography(), nullptr,
             [&](const ConflictEvent& e) { events.push_back(e); });
  auto report = match_events(events, scenario.truth, config.frame_tolerance);
  if (events_out)
    events_out->insert(events_out->end(), events.begin(), events.end());
  return report;
}

std::pair<std::vector<EvaluationReport>, EvaluationReport> evaluate_suite(
    std::span<const Scenario> suite, const PipelineConfig& config) {
  std::vector<EvaluationReport> reports;
  reports.reserve(suite.size());
  for (const auto& scenario : suite)
    reports.push_back(evaluate_scenario(scenario, config));
  auto total = aggregate(reports);
  return {std::move(reports), std::move(total)};
}

SweepRunner make_suite_runner(std::vector<Scenario> suite,
                              PipelineConfig base_config) {
  return [suite = std::move(suite), base_config](
             const std::map<std::string, double>& overrides) {
    PipelineConfig config = base_config;
    for (const auto& [key, value] : overrides)
      apply_override(config, key, value);
    return evaluate_suite(suite, config).second;
  };
}

}  // namespace crosswatch
