#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <crosswatch/detection.hpp>

namespace crosswatch {

/// Corrupt or unordered detection stream. Carries the 1-based line number
/// of the offending record.
class StreamError : public std::runtime_error {
 public:
  StreamError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ReaderStats {
  std::size_t lines_read = 0;
  std::size_t records_kept = 0;
  std::size_t dropped_unknown_class = 0;
  std::size_t dropped_invalid = 0;
};

struct ReaderOptions {
  /// Detections below this confidence are skipped (not counted as drops).
  double min_confidence = 0.0;
};

/// Pulls line-delimited JSON detection records off a stream and groups them
/// into per-frame batches. Frame indices must be non-decreasing; batches are
/// yielded with strictly increasing frame indices.
///
/// Unknown class strings and invariant-violating records are dropped and
/// counted; records that do not parse at all throw StreamError.
class DetectionStreamReader {
 public:
  explicit DetectionStreamReader(std::istream& in, ReaderOptions opts = {});

  /// Next frame batch, or nullopt at end of stream.
  std::optional<FrameDetections> next();

  const ReaderStats& stats() const { return stats_; }

 private:
  std::optional<Detection> parse_line(const std::string& line);

  std::istream& in_;
  ReaderOptions opts_;
  ReaderStats stats_;
  std::optional<Detection> pending_;
  std::int64_t last_frame_ = -1;
  bool done_ = false;
};

/// Reads a whole stream eagerly. Stats are written through `stats` when
/// provided.
std::vector<FrameDetections> read_all(std::istream& in, ReaderOptions opts = {},
                                      ReaderStats* stats = nullptr);

}  // namespace crosswatch
