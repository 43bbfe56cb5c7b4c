#include <doctest.h>

#include <sstream>

#include <crosswatch/stream_reader.hpp>

#include "test_support.hpp"

using namespace crosswatch;

namespace {

std::string record(std::int64_t frame, const std::string& cls, double x,
                   double y, double w, double h, double conf = 0.9) {
  std::ostringstream out;
  out << R"({"frame":)" << frame << R"(,"class":")" << cls << R"(","x":)" << x
      << R"(,"y":)" << y << R"(,"w":)" << w << R"(,"h":)" << h << R"(,"conf":)"
      << conf << "}";
  return out.str();
}

}  // namespace

TEST_CASE("empty source yields an empty sequence") {
  std::istringstream in("");
  ReaderStats stats;
  const auto frames = read_all(in, {}, &stats);
  CHECK(frames.empty());
  CHECK(stats.lines_read == 0);
}

TEST_CASE("records group by frame in order") {
  std::istringstream in(record(1, "vehicle", 10, 10, 5, 5) + "\n" +
                        record(1, "pedestrian", 50, 50, 5, 10) + "\n" +
                        record(2, "vehicle", 12, 10, 5, 5) + "\n");
  const auto frames = read_all(in);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].frame == 1);
  CHECK(frames[0].detections.size() == 2);
  CHECK(frames[1].frame == 2);
  CHECK(frames[1].detections.size() == 1);
}

TEST_CASE("unknown class is dropped and counted") {
  std::istringstream in(record(0, "truck", 10, 10, 5, 5) + "\n" +
                        record(0, "vehicle", 20, 20, 5, 5) + "\n");
  ReaderStats stats;
  const auto frames = read_all(in, {}, &stats);
  CHECK(stats.dropped_unknown_class == 1);
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].detections.size() == 1);
  CHECK(frames[0].detections[0].label == ClassLabel::kVehicle);
}

TEST_CASE("malformed line reports its line number") {
  std::istringstream in(record(0, "vehicle", 10, 10, 5, 5) + "\nnot json\n");
  try {
    read_all(in);
    FAIL("expected StreamError");
  } catch (const StreamError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("missing field reports its line number") {
  std::istringstream in(R"({"frame":0,"class":"vehicle","x":1})" "\n");
  try {
    read_all(in);
    FAIL("expected StreamError");
  } catch (const StreamError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("frame regression is an error") {
  std::istringstream in(record(2, "vehicle", 10, 10, 5, 5) + "\n" +
                        record(1, "vehicle", 10, 10, 5, 5) + "\n");
  CHECK_THROWS_AS(read_all(in), StreamError);
}

TEST_CASE("invalid records are dropped and counted") {
  std::istringstream in(record(0, "vehicle", 10, 10, 0, 5) + "\n");  // w = 0
  ReaderStats stats;
  const auto frames = read_all(in, {}, &stats);
  CHECK(frames.empty());
  CHECK(stats.dropped_invalid == 1);
}

TEST_CASE("min-confidence filter skips low-confidence records") {
  std::istringstream in(record(0, "vehicle", 10, 10, 5, 5, 0.2) + "\n" +
                        record(0, "vehicle", 40, 10, 5, 5, 0.8) + "\n");
  const auto frames = read_all(in, {.min_confidence = 0.5});
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].detections.size() == 1);
  CHECK(frames[0].detections[0].confidence == doctest::Approx(0.8));
}

TEST_CASE("validate_detection checks each invariant") {
  using testing::make_detection;
  auto ok = make_detection(0, ClassLabel::kVehicle, 5, 5, 10, 10);
  CHECK(!validate_detection(ok));

  auto zero_w = ok;
  zero_w.box.w = 0.0;
  CHECK(validate_detection(zero_w) == "w > 0");

  auto short_hist = ok;
  short_hist.histogram = AppearanceHistogram{std::vector<double>(47, 1.0)};
  CHECK(validate_detection(short_hist) == "histogram length 48");

  auto negative_bin = ok;
  negative_bin.histogram = AppearanceHistogram{std::vector<double>(48, 1.0)};
  negative_bin.histogram->bins[3] = -1.0;
  CHECK(validate_detection(negative_bin) == "histogram bins >= 0");

  auto bad_conf = ok;
  bad_conf.confidence = 1.5;
  CHECK(validate_detection(bad_conf) == "conf in [0,1]");
}

TEST_CASE("serialize/read round trip is stable") {
  std::mt19937 rng(7);
  std::vector<FrameDetections> frames;
  std::int64_t frame = 0;
  for (int g = 0; g < 20; ++g) {
    frame += 1 + static_cast<std::int64_t>(rng() % 3);
    FrameDetections batch;
    batch.frame = frame;
    const int count = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < count; ++k) {
      auto det = testing::make_detection(
          frame, ClassLabel::kVehicle, 1.0 + (rng() % 1000) / 7.0,
          1.0 + (rng() % 1000) / 7.0, 1.0 + (rng() % 100) / 3.0,
          1.0 + (rng() % 100) / 3.0, 0.5);
      if (rng() % 2) det.histogram = testing::random_histogram(rng);
      batch.detections.push_back(std::move(det));
    }
    frames.push_back(std::move(batch));
  }

  std::ostringstream first;
  serialize(frames, first);
  std::istringstream in(first.str());
  ReaderStats stats;
  const auto parsed = read_all(in, {}, &stats);
  CHECK(stats.dropped_invalid == 0);
  CHECK(stats.dropped_unknown_class == 0);

  std::ostringstream second;
  serialize(parsed, second);
  CHECK(first.str() == second.str());

  // Frames strictly increasing across yields.
  for (std::size_t i = 1; i < parsed.size(); ++i)
    CHECK(parsed[i].frame > parsed[i - 1].frame);
}
