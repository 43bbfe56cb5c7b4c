#include <crosswatch/stream_reader.hpp>

#include <cmath>

#include <json.hpp>

namespace crosswatch {

using nlohmann::json;

DetectionStreamReader::DetectionStreamReader(std::istream& in,
                                             ReaderOptions opts)
    : in_(in), opts_(opts) {}

std::optional<Detection> DetectionStreamReader::parse_line(
    const std::string& line) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw StreamError(stats_.lines_read, std::string("unparsable record: ") + e.what());
  }

  Detection d;
  try {
    d.frame = rec.at("frame").get<std::int64_t>();
    const auto cls = rec.at("class").get<std::string>();
    d.box.x = rec.at("x").get<double>();
    d.box.y = rec.at("y").get<double>();
    d.box.w = rec.at("w").get<double>();
    d.box.h = rec.at("h").get<double>();
    d.confidence = rec.at("conf").get<double>();
    if (rec.contains("hist")) {
      AppearanceHistogram hist;
      hist.bins = rec.at("hist").get<std::vector<double>>();
      d.histogram = std::move(hist);
    }

    const auto label = class_from_string(cls);
    if (!label) {
      ++stats_.dropped_unknown_class;
      return std::nullopt;
    }
    d.label = *label;
  } catch (const json::exception& e) {
    throw StreamError(stats_.lines_read, std::string("unparsable record: ") + e.what());
  }

  if (d.frame < last_frame_)
    throw StreamError(stats_.lines_read, "frame index regression (" +
                                             std::to_string(d.frame) + " after " +
                                             std::to_string(last_frame_) + ")");
  last_frame_ = d.frame;

  if (validate_detection(d)) {
    ++stats_.dropped_invalid;
    return std::nullopt;
  }
  if (d.confidence < opts_.min_confidence) return std::nullopt;
  ++stats_.records_kept;
  return d;
}

std::optional<FrameDetections> DetectionStreamReader::next() {
  FrameDetections batch;
  bool have_frame = false;
  if (pending_) {
    batch.frame = pending_->frame;
    batch.detections.push_back(std::move(*pending_));
    pending_.reset();
    have_frame = true;
  }

  std::string line;
  while (!done_) {
    if (!std::getline(in_, line)) {
      done_ = true;
      break;
    }
    ++stats_.lines_read;
    if (line.empty()) continue;
    auto det = parse_line(line);
    if (!det) continue;
    if (!have_frame) {
      batch.frame = det->frame;
      batch.detections.push_back(std::move(*det));
      have_frame = true;
    } else if (det->frame == batch.frame) {
      batch.detections.push_back(std::move(*det));
    } else {
      pending_ = std::move(det);
      return batch;
    }
  }
  if (have_frame) return batch;
  return std::nullopt;
}

std::vector<FrameDetections> read_all(std::istream& in, ReaderOptions opts,
                                      ReaderStats* stats) {
  DetectionStreamReader reader(in, opts);
  std::vector<FrameDetections> frames;
  while (auto batch = reader.next()) frames.push_back(std::move(*batch));
  if (stats) *stats = reader.stats();
  return frames;
}

}  // namespace crosswatch
