#include <crosswatch/detection.hpp>

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace crosswatch {

std::optional<ClassLabel> class_from_string(std::string_view name) {
  if (name == "vehicle") return ClassLabel::kVehicle;
  if (name == "pedestrian") return ClassLabel::kPedestrian;
  if (name == "bicycle") return ClassLabel::kBicycle;
  return std::nullopt;
}

std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::kVehicle: return "vehicle";
    case ClassLabel::kPedestrian: return "pedestrian";
    case ClassLabel::kBicycle: return "bicycle";
  }
  return "vehicle";
}

double BoundingBox::diagonal() const { return std::hypot(w, h); }

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.right(), b.right()) -
                                      std::max(a.left(), b.left()));
  const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) -
                                      std::max(a.top(), b.top()));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

std::optional<std::string> validate_detection(const Detection& d) {
  if (d.frame < 0) return "frame >= 0";
  if (!(d.box.w > 0.0)) return "w > 0";
  if (!(d.box.h > 0.0)) return "h > 0";
  if (!(d.box.x >= 0.0)) return "x >= 0";
  if (!(d.box.y >= 0.0)) return "y >= 0";
  if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) return "conf in [0,1]";
  if (d.histogram) {
    const auto& bins = d.histogram->bins;
    if (static_cast<int>(bins.size()) != kHistogramBins)
      return "histogram length 48";
    bool any_positive = false;
    for (double v : bins) {
      if (!(v >= 0.0)) return "histogram bins >= 0";
      if (v > 0.0) any_positive = true;
    }
    if (!any_positive) return "histogram has a positive bin";
  }
  return std::nullopt;
}

void serialize(const Detection& d, std::ostream& out) {
  nlohmann::ordered_json rec;
  rec["frame"] = d.frame;
  rec["class"] = to_string(d.label);
  rec["x"] = d.box.x;
  rec["y"] = d.box.y;
  rec["w"] = d.box.w;
  rec["h"] = d.box.h;
  rec["conf"] = d.confidence;
  if (d.histogram) rec["hist"] = d.histogram->bins;
  out << rec.dump() << '\n';
}

void serialize(const FrameDetections& frame, std::ostream& out) {
  for (const auto& d : frame.detections) serialize(d, out);
}

void serialize(const std::vector<FrameDetections>& frames, std::ostream& out) {
  for (const auto& f : frames) serialize(f, out);
}

}  // namespace crosswatch
