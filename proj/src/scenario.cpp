#include <crosswatch/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace crosswatch {

namespace {

// splitmix64: tiny, fully specified generator so rendered streams are
// reproducible across platforms.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : state_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

bool occluded_at(const ScriptedActor& actor, std::int64_t frame) {
  for (const auto& [first, last] : actor.occlusions)
    if (frame >= first && frame <= last) return true;
  return false;
}

ConflictType conflict_type_from_string(const std::string& s) {
  if (s == "V2V") return ConflictType::kVehicleVehicle;
  if (s == "V2P") return ConflictType::kVehiclePedestrian;
  if (s == "V2B") return ConflictType::kVehicleBicycle;
  throw std::invalid_argument("unknown conflict type: " + s);
}

}  // namespace

bool actor_position(const ScriptedActor& actor, std::int64_t frame, double* x,
                    double* y) {
  const auto& wp = actor.waypoints;
  if (wp.empty() || frame < wp.front().frame || frame > wp.back().frame)
    return false;
  auto next = std::lower_bound(
      wp.begin(), wp.end(), frame,
      [](const Waypoint& w, std::int64_t f) { return w.frame < f; });
  if (next->frame == frame) {
    *x = next->x;
    *y = next->y;
    return true;
  }
  const auto prev = next - 1;
  const double t = static_cast<double>(frame - prev->frame) /
                   static_cast<double>(next->frame - prev->frame);
  *x = prev->x + t * (next->x - prev->x);
  *y = prev->y + t * (next->y - prev->y);
  return true;
}

AppearanceHistogram actor_histogram(std::uint64_t seed) {
  Sampler sampler(seed * 0x9e3779b97f4a7c15ULL + 1);
  AppearanceHistogram hist;
  hist.bins.resize(kHistogramBins);
  for (auto& bin : hist.bins) bin = sampler.uniform(1.0, 100.0);
  return hist;
}

std::vector<FrameDetections> render(std::span<const ScriptedActor> actors,
                                    std::int64_t duration, std::uint64_t seed) {
  for (const auto& actor : actors) {
    for (std::size_t k = 1; k < actor.waypoints.size(); ++k)
      if (actor.waypoints[k].frame <= actor.waypoints[k - 1].frame)
        throw std::invalid_argument("waypoint frames must strictly increase");
  }

  std::vector<AppearanceHistogram> histograms;
  histograms.reserve(actors.size());
  for (const auto& actor : actors)
    histograms.push_back(actor_histogram(actor.histogram_seed));

  Sampler sampler(seed);
  std::vector<FrameDetections> frames;
  for (std::int64_t f = 0; f < duration; ++f) {
    FrameDetections batch;
    batch.frame = f;
    for (std::size_t i = 0; i < actors.size(); ++i) {
      const auto& actor = actors[i];
      double x = 0.0, y = 0.0;
      if (!actor_position(actor, f, &x, &y)) continue;
      if (occluded_at(actor, f)) continue;
      if (actor.dropout > 0.0 && sampler.uniform() < actor.dropout) continue;
      if (actor.jitter_px > 0.0) {
        x += sampler.uniform(-actor.jitter_px, actor.jitter_px);
        y += sampler.uniform(-actor.jitter_px, actor.jitter_px);
      }
      Detection det;
      det.frame = f;
      det.label = actor.label;
      det.box = {std::max(0.0, x), std::max(0.0, y), actor.box_w, actor.box_h};
      det.confidence = 0.9;
      det.histogram = histograms[i];
      batch.detections.push_back(std::move(det));
    }
    if (!batch.detections.empty()) frames.push_back(std::move(batch));
  }
  return frames;
}

std::vector<FrameDetections> render(const Scenario& scenario) {
  return render(scenario.actors, scenario.duration, scenario.seed);
}

Homography synthetic_world_homography() {
  const double meters_per_degree =
      1000.0 * kEarthRadiusKm * std::numbers::pi / 180.0;
  const double pixels_per_degree =
      meters_per_degree / kSyntheticMetersPerPixel;
  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  h(0, 0) = pixels_per_degree;
  h(1, 1) = pixels_per_degree;
  return Homography::from_matrix(h);
}

const Scenario* find_scenario(const std::vector<Scenario>& suite,
                              const std::string& name) {
  for (const auto& s : suite)
    if (s.name == name) return &s;
  return nullptr;
}

Scenario load_scenario(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    Scenario s;
    s.name = doc.at("name").get<std::string>();
    s.duration = doc.at("duration").get<std::int64_t>();
    s.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& a : doc.at("actors")) {
      ScriptedActor actor;
      const auto label = class_from_string(a.at("class").get<std::string>());
      if (!label) throw std::invalid_argument("actors[].class: unknown label");
      actor.label = *label;
      actor.box_w = a.at("w").get<double>();
      actor.box_h = a.at("h").get<double>();
      actor.histogram_seed = a.value("histogram_seed", std::uint64_t{0});
      actor.dropout = a.value("dropout", 0.05);
      actor.jitter_px = a.value("jitter", 1.0);
      for (const auto& w : a.at("waypoints"))
        actor.waypoints.push_back({w.at(0).get<std::int64_t>(),
                                   w.at(1).get<double>(),
                                   w.at(2).get<double>()});
      if (a.contains("occlusions"))
        for (const auto& o : a.at("occlusions"))
          actor.occlusions.emplace_back(o.at(0).get<std::int64_t>(),
                                        o.at(1).get<std::int64_t>());
      s.actors.push_back(std::move(actor));
    }
    if (doc.contains("truth")) {
      for (const auto& t : doc.at("truth")) {
        GroundTruthEvent event;
        event.first_frame = t.at("first_frame").get<std::int64_t>();
        event.last_frame = t.at("last_frame").get<std::int64_t>();
        event.type = conflict_type_from_string(t.at("type").get<std::string>());
        event.participants = {t.at("participants").at(0).get<int>(),
                              t.at("participants").at(1).get<int>()};
        s.truth.push_back(event);
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("scenario file: ") + e.what());
  }
}

void save_scenario(const Scenario& scenario, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["name"] = scenario.name;
  doc["duration"] = scenario.duration;
  doc["seed"] = scenario.seed;
  doc["actors"] = nlohmann::json::array();
  for (const auto& a : scenario.actors) {
    nlohmann::ordered_json actor;
    actor["class"] = to_string(a.label);
    actor["w"] = a.box_w;
    actor["h"] = a.box_h;
    actor["histogram_seed"] = a.histogram_seed;
    actor["dropout"] = a.dropout;
    actor["jitter"] = a.jitter_px;
    actor["waypoints"] = nlohmann::json::array();
    for (const auto& w : a.waypoints)
      actor["waypoints"].push_back({w.frame, w.x, w.y});
    if (!a.occlusions.empty()) {
      actor["occlusions"] = nlohmann::json::array();
      for (const auto& o : a.occlusions)
        actor["occlusions"].push_back({o.first, o.second});
    }
    doc["actors"].push_back(std::move(actor));
  }
  doc["truth"] = nlohmann::json::array();
  for (const auto& t : scenario.truth) {
    nlohmann::ordered_json event;
    event["first_frame"] = t.first_frame;
    event["last_frame"] = t.last_frame;
    event["type"] = to_string(t.type);
    event["participants"] = {t.participants.first, t.participants.second};
    doc["truth"].push_back(std::move(event));
  }
  out << doc.dump(2) << '\n';
}

std::vector<GroundTruthEvent> load_truth(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    std::vector<GroundTruthEvent> truth;
    for (const auto& t : doc.at("truth")) {
      GroundTruthEvent event;
      event.first_frame = t.at("first_frame").get<std::int64_t>();
      event.last_frame = t.at("last_frame").get<std::int64_t>();
      event.type = conflict_type_from_string(t.at("type").get<std::string>());
      event.participants = {t.at("participants").at(0).get<int>(),
                            t.at("participants").at(1).get<int>()};
      truth.push_back(event);
    }
    return truth;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("truth manifest: ") + e.what());
  }
}

void save_truth(std::span<const GroundTruthEvent> truth, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["truth"] = nlohmann::json::array();
  for (const auto& t : truth) {
    nlohmann::ordered_json event;
    event["first_frame"] = t.first_frame;
    event["last_frame"] = t.last_frame;
    event["type"] = to_string(t.type);
    event["participants"] = {t.participants.first, t.participants.second};
    doc["truth"].push_back(std::move(event));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace crosswatch
