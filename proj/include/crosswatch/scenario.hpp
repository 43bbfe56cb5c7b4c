#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <crosswatch/conflict.hpp>
#include <crosswatch/detection.hpp>
#include <crosswatch/homography.hpp>

namespace crosswatch {

struct Waypoint {
  std::int64_t frame = 0;
  double x = 0.0;
  double y = 0.0;
};

/// One scripted road-user. Present from its first to its last waypoint,
/// moving on linear interpolation between them. Detection noise is
/// controlled per actor.
struct ScriptedActor {
  ClassLabel label = ClassLabel::kVehicle;
  std::vector<Waypoint> waypoints;  // strictly increasing frames
  double box_w = 40.0;
  double box_h = 20.0;
  std::uint64_t histogram_seed = 0;
  double dropout = 0.05;  // per-frame probability of a missed detection
  double jitter_px = 1.0; // uniform center noise half-width
  // Inclusive frame ranges with no detections (scripted occluders).
  std::vector<std::pair<std::int64_t, std::int64_t>> occlusions;
};

struct GroundTruthEvent {
  std::int64_t first_frame = 0;
  std::int64_t last_frame = 0;
  ConflictType type = ConflictType::kVehicleVehicle;
  std::pair<int, int> participants{0, 0};  // actor indices
};

struct Scenario {
  std::string name;
  std::int64_t duration = 0;
  std::uint64_t seed = 0;
  std::vector<ScriptedActor> actors;
  std::vector<GroundTruthEvent> truth;
};

/// Scripted center of an actor at a frame; false when the actor is not in
/// the scene at that frame.
bool actor_position(const ScriptedActor& actor, std::int64_t frame, double* x,
                    double* y);

/// Renders the actors into a per-frame detection stream. Pure function of
/// (actors, duration, seed).
std::vector<FrameDetections> render(std::span<const ScriptedActor> actors,
                                    std::int64_t duration, std::uint64_t seed);
std::vector<FrameDetections> render(const Scenario& scenario);

/// Deterministic 48-bin histogram for an actor seed.
AppearanceHistogram actor_histogram(std::uint64_t seed);

/// Calibration used by the synthetic world: roughly 10 px per meter on an
/// equatorial ground plane.
Homography synthetic_world_homography();
inline constexpr double kSyntheticMetersPerPixel = 0.1;

/// Named, hand-scripted scenarios covering conflicts of every type plus
/// the no-event and stress cases. Solvable by the pipeline at the default
/// configuration.
std::vector<Scenario> builtin_suite();
const Scenario* find_scenario(const std::vector<Scenario>& suite,
                              const std::string& name);

// Scenario and ground-truth manifest files.
Scenario load_scenario(std::istream& in);
void save_scenario(const Scenario& scenario, std::ostream& out);
std::vector<GroundTruthEvent> load_truth(std::istream& in);
void save_truth(std::span<const GroundTruthEvent> truth, std::ostream& out);

}  // namespace crosswatch
