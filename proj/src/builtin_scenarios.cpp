#include <crosswatch/scenario.hpp>

namespace crosswatch {

namespace {

// The synthetic world runs at 30 fps with ~10 px per meter, and the
// half-window averaging in the speed estimator reads roughly half the
// instantaneous speed for constant motion. Scripted speeds are chosen so
// the windowed readings clear the default 10 km/h gate: a vehicle at
// 4 px/frame reads ~21.6 km/h, a bicycle at 3 px/frame ~16.2 km/h, and a
// running pedestrian at 2.2 px/frame ~11.9 km/h.

ScriptedActor vehicle_h(std::vector<Waypoint> wp, std::uint64_t seed) {
  ScriptedActor a;
  a.label = ClassLabel::kVehicle;
  a.waypoints = std::move(wp);
  a.box_w = 40.0;
  a.box_h = 20.0;
  a.histogram_seed = seed;
  return a;
}

ScriptedActor vehicle_v(std::vector<Waypoint> wp, std::uint64_t seed) {
  auto a = vehicle_h(std::move(wp), seed);
  a.box_w = 20.0;
  a.box_h = 40.0;
  return a;
}

ScriptedActor pedestrian(std::vector<Waypoint> wp, std::uint64_t seed) {
  ScriptedActor a;
  a.label = ClassLabel::kPedestrian;
  a.waypoints = std::move(wp);
  a.box_w = 10.0;
  a.box_h = 20.0;
  a.histogram_seed = seed;
  return a;
}

ScriptedActor bicycle(std::vector<Waypoint> wp, std::uint64_t seed) {
  ScriptedActor a;
  a.label = ClassLabel::kBicycle;
  a.waypoints = std::move(wp);
  a.box_w = 12.0;
  a.box_h = 24.0;
  a.histogram_seed = seed;
  return a;
}

// Eastbound car braking hard at ~frame 100 and stopping short of the
// crossing point at x=460; shared by the near-miss style scenarios.
ScriptedActor braking_car(std::uint64_t seed) {
  return vehicle_h({{0, 60, 300}, {95, 440, 300}, {105, 460, 300},
                    {200, 460, 300}},
                   seed);
}

Scenario v2v_collision() {
  Scenario s;
  s.name = "v2v_collision";
  s.duration = 200;
  s.seed = 1;
  s.actors.push_back(vehicle_h(
      {{0, 80, 300}, {120, 560, 300}, {200, 560, 300}}, 11));
  s.actors.push_back(vehicle_v(
      {{0, 560, 700}, {120, 560, 310}, {200, 560, 310}}, 12));
  s.truth.push_back({120, 180, ConflictType::kVehicleVehicle, {0, 1}});
  return s;
}

Scenario v2v_near_miss() {
  Scenario s;
  s.name = "v2v_near_miss";
  s.duration = 200;
  s.seed = 2;
  s.actors.push_back(braking_car(21));
  s.actors.push_back(vehicle_v({{20, 500, 700}, {170, 500, 100}}, 22));
  s.truth.push_back({105, 170, ConflictType::kVehicleVehicle, {0, 1}});
  return s;
}

Scenario v2b_conflict() {
  Scenario s;
  s.name = "v2b_conflict";
  s.duration = 200;
  s.seed = 3;
  s.actors.push_back(braking_car(31));
  s.actors.push_back(bicycle({{20, 500, 600}, {200, 500, 60}}, 32));
  s.truth.push_back({105, 170, ConflictType::kVehicleBicycle, {0, 1}});
  return s;
}

Scenario v2p_conflict() {
  Scenario s;
  s.name = "v2p_conflict";
  s.duration = 200;
  s.seed = 4;
  s.actors.push_back(braking_car(41));
  s.actors.push_back(pedestrian({{20, 500, 520}, {200, 500, 124}}, 42));
  s.truth.push_back({105, 170, ConflictType::kVehiclePedestrian, {0, 1}});
  return s;
}

Scenario parallel_passing() {
  Scenario s;
  s.name = "parallel_passing";
  s.duration = 200;
  s.seed = 5;
  s.actors.push_back(vehicle_h({{0, 60, 290}, {200, 860, 290}}, 51));
  s.actors.push_back(vehicle_h({{0, 100, 330}, {200, 700, 330}}, 52));
  return s;
}

Scenario queued_stop() {
  Scenario s;
  s.name = "queued_stop";
  s.duration = 200;
  s.seed = 6;
  s.actors.push_back(vehicle_h(
      {{0, 160, 300}, {85, 500, 300}, {200, 500, 300}}, 61));
  s.actors.push_back(vehicle_h(
      {{0, 100, 300}, {85, 440, 300}, {200, 440, 300}}, 62));
  s.actors.push_back(vehicle_h(
      {{0, 40, 300}, {85, 380, 300}, {200, 380, 300}}, 63));
  return s;
}

Scenario occlusion_gap() {
  Scenario s;
  s.name = "occlusion_gap";
  s.duration = 200;
  s.seed = 7;
  auto a = vehicle_h({{0, 80, 300}, {200, 880, 300}}, 71);
  a.dropout = 0.0;
  a.occlusions.emplace_back(100, 109);  // exactly max_age frames
  s.actors.push_back(std::move(a));
  auto b = vehicle_h({{0, 80, 600}, {200, 880, 600}}, 72);
  b.dropout = 0.0;
  s.actors.push_back(std::move(b));
  return s;
}

Scenario crossing_identities() {
  Scenario s;
  s.name = "crossing_identities";
  s.duration = 200;
  s.seed = 8;
  auto a = vehicle_h({{0, 40, 300}, {200, 840, 300}}, 81);
  a.dropout = 0.0;
  auto b = vehicle_v({{0, 440, 700}, {162, 440, 52}}, 82);
  b.dropout = 0.0;
  s.actors.push_back(std::move(a));
  s.actors.push_back(std::move(b));
  return s;
}

Scenario stalled_vehicle() {
  Scenario s;
  s.name = "stalled_vehicle";
  s.duration = 200;
  s.seed = 9;
  s.actors.push_back(vehicle_h({{0, 300, 400}, {200, 300, 400}}, 91));
  s.actors.push_back(vehicle_h({{0, 60, 250}, {200, 860, 650}}, 92));
  return s;
}

Scenario dense_throughput() {
  Scenario s;
  s.name = "dense_throughput";
  s.duration = 300;
  s.seed = 10;
  for (int lane = 0; lane < 25; ++lane) {
    const double y = 30.0 + 28.0 * lane;
    s.actors.push_back(vehicle_h(
        {{0, 60, y}, {300, 1260, y}}, 100 + 2 * lane));
    s.actors.push_back(vehicle_h(
        {{0, 460, y}, {300, 1660, y}}, 101 + 2 * lane));
  }
  return s;
}

}  // namespace

std::vector<Scenario> builtin_suite() {
  return {v2v_collision(),   v2v_near_miss(),      v2b_conflict(),
          v2p_conflict(),    parallel_passing(),   queued_stop(),
          occlusion_gap(),   crossing_identities(), stalled_vehicle(),
          dense_throughput()};
}

}  // namespace crosswatch
