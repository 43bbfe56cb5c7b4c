#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include <crosswatch/homography.hpp>
#include <crosswatch/speed.hpp>

using namespace crosswatch;

namespace {

Eigen::Matrix3d random_valid_homography(std::mt19937& rng) {
  std::uniform_real_distribution<double> small(-0.5, 0.5);
  Eigen::Matrix3d h;
  do {
    h = Eigen::Matrix3d::Identity();
    h(0, 0) = 1.0 + small(rng);
    h(1, 1) = 1.0 + small(rng);
    h(0, 1) = small(rng);
    h(1, 0) = small(rng);
    h(0, 2) = 10.0 * small(rng);
    h(1, 2) = 10.0 * small(rng);
    h(2, 0) = 1e-3 * small(rng);
    h(2, 1) = 1e-3 * small(rng);
  } while (std::abs(h.determinant()) < 1e-6);
  return h;
}

GeoPoint random_geo(std::mt19937& rng) {
  std::uniform_real_distribution<double> lat(-90.0, 90.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  return GeoPoint{lat(rng), lon(rng)};
}

std::vector<HistoryPoint> straight_history(int n, double x0, double y0,
                                           double step_x, double step_y) {
  std::vector<HistoryPoint> h;
  for (int i = 0; i < n; ++i)
    h.push_back({i, x0 + step_x * i, y0 + step_y * i});
  return h;
}

}  // namespace

TEST_CASE("identity calibration passes pixels through") {
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  const auto g = h.image_to_world(12.5, -3.0);
  CHECK(g.lat == doctest::Approx(12.5));
  CHECK(g.lon == doctest::Approx(-3.0));
}

TEST_CASE("world/image round trip on random homographies") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = Homography::from_matrix(random_valid_homography(rng));
    CHECK((h.matrix() * h.inverse() - Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    const GeoPoint g{coord(rng), coord(rng)};
    const auto [px, py] = h.world_to_image(g);
    const auto back = h.image_to_world(px, py);
    CHECK(back.lat == doctest::Approx(g.lat).epsilon(1e-9));
    CHECK(back.lon == doctest::Approx(g.lon).epsilon(1e-9));
  }
}

TEST_CASE("a singular matrix is rejected") {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(0, 0) = 1.0;
  CHECK_THROWS_AS(Homography::from_matrix(h), std::invalid_argument);
}

TEST_CASE("a pixel on the vanishing line maps to infinity") {
  // Inverse with third row (1, 0, -1): pixel (1, y) has homogeneous image 0.
  Eigen::Matrix3d h_inv;
  h_inv << 1, 0, 0, 0, 1, 0, 1, 0, -1;
  const auto h = Homography::from_matrix(h_inv.inverse());
  CHECK_THROWS_AS(h.image_to_world(1.0, 5.0), PointAtInfinity);
  CHECK_NOTHROW(h.image_to_world(2.0, 5.0));
}

TEST_CASE("DLT fit recovers a known homography") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> coord(-40.0, 40.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto truth = Homography::from_matrix(random_valid_homography(rng));
    std::vector<CalibrationPoint> points;
    for (int i = 0; i < 6; ++i) {
      const GeoPoint g{coord(rng), coord(rng)};
      const auto [px, py] = truth.world_to_image(g);
      points.push_back({px, py, g.lat, g.lon});
    }
    double residual = 1.0;
    const auto fitted = Homography::fit(points, &residual);
    CHECK(residual < 1e-9);
    // Compare action, not matrices: homographies are scale equivalence
    // classes.
    for (int i = 0; i < 5; ++i) {
      const GeoPoint g{coord(rng), coord(rng)};
      const auto [px, py] = truth.world_to_image(g);
      const auto mapped = fitted.image_to_world(px, py);
      CHECK(mapped.lat == doctest::Approx(g.lat).epsilon(1e-6));
      CHECK(mapped.lon == doctest::Approx(g.lon).epsilon(1e-6));
    }
  }
}

TEST_CASE("DLT fit requires at least four points") {
  std::vector<CalibrationPoint> points(3);
  CHECK_THROWS_AS(Homography::fit(points), std::invalid_argument);
}

TEST_CASE("calibration file with an explicit matrix") {
  std::istringstream in(R"({"H": [2, 0, 0, 0, 2, 0, 0, 0, 1]})");
  const auto cal = load_calibration(in);
  CHECK(!cal.fitted);
  const auto g = cal.homography.image_to_world(10.0, 4.0);
  CHECK(g.lat == doctest::Approx(5.0));
  CHECK(g.lon == doctest::Approx(2.0));
}

TEST_CASE("calibration file with point pairs triggers the fit") {
  std::istringstream in(R"({"points": [
    {"px": 0,   "py": 0,   "lat": 0,  "lon": 0},
    {"px": 100, "py": 0,   "lat": 0,  "lon": 10},
    {"px": 100, "py": 100, "lat": 10, "lon": 10},
    {"px": 0,   "py": 100, "lat": 10, "lon": 0},
    {"px": 50,  "py": 50,  "lat": 5,  "lon": 5}
  ]})");
  const auto cal = load_calibration(in);
  CHECK(cal.fitted);
  CHECK(cal.fit_residual < 1e-9);
  CHECK(!cal.residual_warning);
  const auto g = cal.homography.image_to_world(50.0, 0.0);
  CHECK(g.lat == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(g.lon == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("calibration file errors") {
  std::istringstream bad_json("{nope");
  CHECK_THROWS_AS(load_calibration(bad_json), std::invalid_argument);
  std::istringstream wrong_len(R"({"H": [1, 2, 3]})");
  CHECK_THROWS_AS(load_calibration(wrong_len), std::invalid_argument);
  std::istringstream no_keys(R"({"other": 1})");
  CHECK_THROWS_AS(load_calibration(no_keys), std::invalid_argument);
}

TEST_CASE("haversine hand values") {
  const GeoPoint origin{0.0, 0.0};
  CHECK(haversine_km(origin, origin) == doctest::Approx(0.0));
  // One degree of longitude along the equator.
  const double expected = kEarthRadiusKm * std::numbers::pi / 180.0;
  CHECK(haversine_km(origin, GeoPoint{0.0, 1.0}) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(haversine_km(origin, GeoPoint{0.0, 1.0}) ==
        doctest::Approx(111.195).epsilon(1e-5));
}

TEST_CASE("haversine symmetry, bound, and triangle inequality") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_geo(rng);
    const auto b = random_geo(rng);
    const auto c = random_geo(rng);
    const double ab = haversine_km(a, b);
    CHECK(ab == doctest::Approx(haversine_km(b, a)).epsilon(1e-12));
    CHECK(ab <= std::numbers::pi * kEarthRadiusKm + 1e-9);
    CHECK(ab <= haversine_km(a, c) + haversine_km(c, b) + 1e-9);
  }
}

TEST_CASE("stationary track reports stalled with zero speed") {
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  const auto history = straight_history(30, 400.0, 300.0, 0.0, 0.0);
  const auto est = estimate_speed(history, h, 30, 30.0, 2.0);
  CHECK(est.stalled);
  CHECK(est.speed_kmh == 0.0);
}

TEST_CASE("speed formula hand example: 36 km/h") {
  // Averaged half-window points 0.01 km apart at 30 fps over 30 frames.
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  const double dlon = 0.01 / kEarthRadiusKm * 180.0 / std::numbers::pi;
  std::vector<HistoryPoint> history;
  for (int i = 0; i < 15; ++i) history.push_back({i, 0.0, 0.0});
  for (int i = 15; i < 30; ++i) history.push_back({i, 0.0, dlon});
  const auto est = estimate_speed(history, h, 30, 30.0, 0.0);
  CHECK(!est.stalled);
  CHECK(est.speed_kmh == doctest::Approx(36.0).epsilon(1e-9));
}

TEST_CASE("speed is linear in fps") {
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  const auto history = straight_history(30, 0.0, 0.0, 1e-5, 0.0);
  const auto base = estimate_speed(history, h, 30, 30.0, 0.0);
  const auto doubled = estimate_speed(history, h, 30, 60.0, 0.0);
  CHECK(doubled.speed_kmh == doctest::Approx(2.0 * base.speed_kmh));
}

TEST_CASE("odd windows split floor/ceil") {
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  const auto history = straight_history(31, 0.0, 0.0, 1e-5, 0.0);
  const auto est = estimate_speed(history, h, 31, 30.0, 0.0);
  // First 15 entries average x = 7e-5, last 16 average x = 22.5e-5.
  const double d_deg = 22.5e-5 - 7e-5;
  const double d_km = d_deg * std::numbers::pi / 180.0 * kEarthRadiusKm;
  CHECK(est.speed_kmh ==
        doctest::Approx(d_km * 3600.0 * 30.0 / 31.0).epsilon(1e-9));
}

TEST_CASE("history older than the window does not matter") {
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  auto history = straight_history(30, 0.0, 0.0, 1e-5, 2e-5);
  const auto base = estimate_speed(history, h, 30, 30.0, 0.0);

  std::vector<HistoryPoint> padded;
  for (int i = 0; i < 25; ++i) padded.push_back({-100 + i, 999.0 + i, 0.0});
  padded.insert(padded.end(), history.begin(), history.end());
  const auto same = estimate_speed(padded, h, 30, 30.0, 0.0);
  CHECK(same.speed_kmh == doctest::Approx(base.speed_kmh).epsilon(1e-12));
}

TEST_CASE("insufficient history is an error") {
  const auto h = Homography::from_matrix(Eigen::Matrix3d::Identity());
  const auto history = straight_history(10, 0.0, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(estimate_speed(history, h, 30, 30.0, 2.0),
                  std::invalid_argument);
}
