#include <doctest.h>

#include <random>
#include <set>

#include <crosswatch/tracker.hpp>

#include "test_support.hpp"

using namespace crosswatch;
using testing::make_detection;

namespace {

FrameDetections frame_of(std::int64_t frame, std::vector<Detection> dets) {
  return FrameDetections{frame, std::move(dets)};
}

AppearanceHistogram striped(bool phase) {
  AppearanceHistogram h;
  h.bins.resize(kHistogramBins);
  for (int i = 0; i < kHistogramBins; ++i)
    h.bins[i] = (i % 2 == static_cast<int>(phase)) ? 1.0 : 0.0;
  return h;
}

}  // namespace

TEST_CASE("associate with no tracks leaves all detections unmatched") {
  const auto result =
      associate({}, frame_of(0, {make_detection(0, ClassLabel::kVehicle, 10,
                                                10, 5, 5)}),
                CostWeights{}, 0.6);
  CHECK(result.matches.empty());
  CHECK(result.unmatched_tracks.empty());
  REQUIRE(result.unmatched_detections.size() == 1);
}

TEST_CASE("identical box matches at zero cost") {
  MultiObjectTracker tracker;
  tracker.step(frame_of(0, {make_detection(0, ClassLabel::kVehicle, 50, 50,
                                           20, 10)}));
  const auto result = associate(
      tracker.tracks(),
      frame_of(1, {make_detection(1, ClassLabel::kVehicle, 50, 50, 20, 10)}),
      CostWeights{}, 0.6);
  REQUIRE(result.matches.size() == 1);
  CHECK(result.matches[0].cost == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(result.unmatched_tracks.empty());
  CHECK(result.unmatched_detections.empty());
}

TEST_CASE("cross-class pairs never match") {
  MultiObjectTracker tracker;
  tracker.step(frame_of(0, {make_detection(0, ClassLabel::kVehicle, 50, 50,
                                           20, 10)}));
  const auto result = associate(
      tracker.tracks(),
      frame_of(1, {make_detection(1, ClassLabel::kPedestrian, 50, 50, 20, 10)}),
      CostWeights{}, 0.6);
  CHECK(result.matches.empty());
  CHECK(result.unmatched_tracks.size() == 1);
  CHECK(result.unmatched_detections.size() == 1);
}

TEST_CASE("association result is a partition") {
  std::mt19937 rng(23);
  MultiObjectTracker tracker;
  // Seed some tracks.
  std::vector<Detection> first;
  for (int i = 0; i < 6; ++i)
    first.push_back(make_detection(0, ClassLabel::kVehicle, 100.0 + 80.0 * i,
                                   200, 20, 10));
  tracker.step(frame_of(0, std::move(first)));

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Detection> dets;
    const int m = static_cast<int>(rng() % 8);
    for (int j = 0; j < m; ++j)
      dets.push_back(make_detection(1, ClassLabel::kVehicle,
                                    50.0 + (rng() % 600),
                                    150.0 + (rng() % 100), 20, 10));
    const auto result =
        associate(tracker.tracks(), frame_of(1, dets), CostWeights{}, 0.6);

    std::set<int> track_ids;
    for (const auto& t : tracker.tracks()) track_ids.insert(t.id);
    std::set<int> seen_tracks;
    std::set<int> seen_dets;
    for (const auto& match : result.matches) {
      CHECK(match.cost <= 0.6);
      CHECK(seen_tracks.insert(match.track_id).second);
      CHECK(seen_dets.insert(match.detection_index).second);
    }
    for (int id : result.unmatched_tracks)
      CHECK(seen_tracks.insert(id).second);
    for (int j : result.unmatched_detections)
      CHECK(seen_dets.insert(j).second);
    CHECK(seen_tracks.size() == track_ids.size());
    CHECK(seen_dets.size() == static_cast<std::size_t>(m));
  }
}

TEST_CASE("a steadily detected object yields one confirmed track") {
  MultiObjectTracker tracker;
  for (int k = 0; k < 10; ++k)
    tracker.step(frame_of(
        k, {make_detection(k, ClassLabel::kVehicle, 100.0 + 4.0 * k, 200, 20,
                           10)}));
  REQUIRE(tracker.tracks().size() == 1);
  const auto& track = tracker.tracks()[0];
  CHECK(track.status == TrackStatus::kConfirmed);
  CHECK(track.hits == 10);
  CHECK(track.history.size() == 10);
  for (std::size_t i = 1; i < track.history.size(); ++i)
    CHECK(track.history[i].frame > track.history[i - 1].frame);
}

TEST_CASE("track survives a gap of max_age frames") {
  MultiObjectTracker tracker;
  const int max_age = tracker.config().max_age;
  int frame = 0;
  for (; frame < 10; ++frame)
    tracker.step(frame_of(frame, {make_detection(
                              frame, ClassLabel::kVehicle,
                              100.0 + 4.0 * frame, 200, 20, 10)}));
  const int id = tracker.tracks()[0].id;

  // max_age frames without the object; a different-class detection keeps
  // the stream alive without being matchable.
  for (int k = 0; k < max_age; ++k, ++frame)
    tracker.step(frame_of(frame, {make_detection(
                              frame, ClassLabel::kPedestrian, 700, 600, 20,
                              10)}));
  // Reappears near the prediction.
  tracker.step(frame_of(frame, {make_detection(frame, ClassLabel::kVehicle,
                                               100.0 + 4.0 * frame, 200, 20,
                                               10)}));
  bool found = false;
  for (const auto& t : tracker.tracks())
    if (t.id == id) {
      found = true;
      CHECK(t.misses == 0);
    }
  CHECK(found);
}

TEST_CASE("track dies after max_age + 1 missed frames") {
  MultiObjectTracker tracker;
  const int max_age = tracker.config().max_age;
  int frame = 0;
  for (; frame < 10; ++frame)
    tracker.step(frame_of(frame, {make_detection(
                              frame, ClassLabel::kVehicle,
                              100.0 + 4.0 * frame, 200, 20, 10)}));
  const int id = tracker.tracks()[0].id;

  std::vector<int> deleted;
  for (int k = 0; k < max_age + 1; ++k, ++frame) {
    const auto result = tracker.step(
        frame_of(frame, {make_detection(frame, ClassLabel::kPedestrian, 700,
                                        600, 20, 10)}));
    deleted.insert(deleted.end(), result.deleted_track_ids.begin(),
                   result.deleted_track_ids.end());
  }
  CHECK(std::find(deleted.begin(), deleted.end(), id) != deleted.end());

  // The object comes back: it must get a fresh id.
  const auto result = tracker.step(
      frame_of(frame, {make_detection(frame, ClassLabel::kVehicle,
                                      100.0 + 4.0 * frame, 200, 20, 10)}));
  REQUIRE(result.new_track_ids.size() == 1);
  CHECK(result.new_track_ids[0] != id);
}

TEST_CASE("live track ids are unique after every step") {
  std::mt19937 rng(29);
  MultiObjectTracker tracker;
  for (int frame = 0; frame < 40; ++frame) {
    std::vector<Detection> dets;
    const int m = static_cast<int>(rng() % 5);
    for (int j = 0; j < m; ++j)
      dets.push_back(make_detection(frame, ClassLabel::kVehicle,
                                    50.0 + (rng() % 800),
                                    50.0 + (rng() % 500), 20, 10));
    tracker.step(frame_of(frame, std::move(dets)));
    std::set<int> ids;
    for (const auto& t : tracker.tracks()) CHECK(ids.insert(t.id).second);
  }
}

TEST_CASE("out-of-order frames are rejected") {
  MultiObjectTracker tracker;
  tracker.step(frame_of(5, {}));
  CHECK_THROWS_AS(tracker.step(frame_of(5, {})), std::invalid_argument);
  CHECK_THROWS_AS(tracker.step(frame_of(4, {})), std::invalid_argument);
}

TEST_CASE("appearance keeps identities through a crossing") {
  // Two vehicles cross at right angles; around the crossing frame their
  // boxes coincide, so only the anti-correlated histograms can keep the
  // assignment straight.
  MultiObjectTracker tracker;
  const auto hist_a = striped(false);
  const auto hist_b = striped(true);

  int id_a = -1, id_b = -1;
  for (int frame = 0; frame <= 60; ++frame) {
    const double ax = 100.0 + 4.0 * frame;  // eastbound through (220, 220)
    const double ay = 220.0;
    const double bx = 220.0;                // southbound through (220, 220)
    const double by = 100.0 + 4.0 * frame;
    auto da = make_detection(frame, ClassLabel::kVehicle, ax, ay, 20, 20);
    da.histogram = hist_a;
    auto db = make_detection(frame, ClassLabel::kVehicle, bx, by, 20, 20);
    db.histogram = hist_b;
    tracker.step(frame_of(frame, {da, db}));
    if (frame == 5) {
      REQUIRE(tracker.tracks().size() == 2);
      for (const auto& t : tracker.tracks()) {
        const auto box = t.box();
        if (std::abs(box.y - 220.0) < 1.0) id_a = t.id;
        if (std::abs(box.x - 220.0) < 1.0 && std::abs(box.y - 220.0) > 1.0)
          id_b = t.id;
      }
      REQUIRE(id_a > 0);
      REQUIRE(id_b > 0);
    }
  }

  REQUIRE(tracker.tracks().size() == 2);
  for (const auto& t : tracker.tracks()) {
    const auto box = t.box();
    if (t.id == id_a) {
      CHECK(box.y == doctest::Approx(220.0).epsilon(0.01));
      CHECK(box.x == doctest::Approx(340.0).epsilon(0.01));
    } else {
      CHECK(t.id == id_b);
      CHECK(box.x == doctest::Approx(220.0).epsilon(0.01));
      CHECK(box.y == doctest::Approx(340.0).epsilon(0.01));
    }
  }
}

TEST_CASE("histogram smoothing keeps most of the running histogram") {
  MultiObjectTracker tracker;
  auto d0 = make_detection(0, ClassLabel::kVehicle, 100, 100, 20, 10);
  AppearanceHistogram h0;
  h0.bins.assign(kHistogramBins, 10.0);
  h0.bins[0] = 20.0;
  d0.histogram = h0;
  tracker.step(frame_of(0, {d0}));

  auto d1 = d0;
  d1.frame = 1;
  AppearanceHistogram h1;
  h1.bins.assign(kHistogramBins, 10.0);
  h1.bins[0] = 40.0;
  d1.histogram = h1;
  tracker.step(frame_of(1, {d1}));

  REQUIRE(tracker.tracks().size() == 1);
  REQUIRE(tracker.tracks()[0].histogram.has_value());
  CHECK(tracker.tracks()[0].histogram->bins[0] ==
        doctest::Approx(0.9 * 20.0 + 0.1 * 40.0));
}
