#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace crosswatch {

/// Road-user categories handled by the engine. Anything else in the input
/// stream is dropped by the reader.
enum class ClassLabel { kVehicle, kPedestrian, kBicycle };

std::optional<ClassLabel> class_from_string(std::string_view name);
std::string_view to_string(ClassLabel label);

/// Axis-aligned box in image coordinates (origin top-left). (x, y) is the
/// box CENTER in pixels.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double aspect() const { return w / h; }
  double diagonal() const;
  double left() const { return x - 0.5 * w; }
  double right() const { return x + 0.5 * w; }
  double top() const { return y - 0.5 * h; }
  double bottom() const { return y + 0.5 * h; }
};

/// Intersection-over-union of two center-form boxes; 0 when disjoint.
double iou(const BoundingBox& a, const BoundingBox& b);

/// RGB color histogram: three channels x 16 bins, concatenated.
inline constexpr int kHistogramBins = 48;

struct AppearanceHistogram {
  std::vector<double> bins;
};

struct Detection {
  std::int64_t frame = 0;
  ClassLabel label = ClassLabel::kVehicle;
  BoundingBox box;
  double confidence = 0.0;
  std::optional<AppearanceHistogram> histogram;
};

/// All detections observed at one frame index.
struct FrameDetections {
  std::int64_t frame = 0;
  std::vector<Detection> detections;
};

/// Checks the box/confidence/histogram invariants of a single detection.
/// Returns the first violated invariant as a short description, or nullopt
/// when the detection is valid.
std::optional<std::string> validate_detection(const Detection& d);

/// Writes one detection per line in the stream interchange format.
void serialize(const Detection& d, std::ostream& out);
void serialize(const FrameDetections& frame, std::ostream& out);
void serialize(const std::vector<FrameDetections>& frames, std::ostream& out);

}  // namespace crosswatch
