#include <crosswatch/homography.hpp>

#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

namespace crosswatch {

namespace {

constexpr double kResidualWarnThreshold = 1e-6;

// Similarity transform taking the points to centroid 0 with mean distance
// sqrt(2) (standard DLT conditioning).
Eigen::Matrix3d normalizing_transform(const std::vector<Eigen::Vector2d>& pts) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());

  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= static_cast<double>(pts.size());
  const double scale =
      mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;

  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 0) = scale;
  t(1, 1) = scale;
  t(0, 2) = -scale * centroid.x();
  t(1, 2) = -scale * centroid.y();
  return t;
}

}  // namespace

Homography Homography::from_matrix(const Eigen::Matrix3d& world_to_image) {
  if (!world_to_image.allFinite())
    throw std::invalid_argument("homography has non-finite entries");
  Eigen::FullPivLU<Eigen::Matrix3d> lu(world_to_image);
  if (!lu.isInvertible())
    throw std::invalid_argument("homography matrix is singular");
  return Homography(world_to_image, lu.inverse());
}

Homography Homography::fit(std::span<const CalibrationPoint> points,
                           double* residual) {
  if (points.size() < 4)
    throw std::invalid_argument("homography fit needs at least 4 points");

  std::vector<Eigen::Vector2d> world, image;
  world.reserve(points.size());
  image.reserve(points.size());
  for (const auto& p : points) {
    world.emplace_back(p.lat, p.lon);
    image.emplace_back(p.px, p.py);
  }
  const Eigen::Matrix3d t_world = normalizing_transform(world);
  const Eigen::Matrix3d t_image = normalizing_transform(image);

  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d w = t_world * world[i].homogeneous();
    const Eigen::Vector3d m = t_image * image[i].homogeneous();
    const double u = w.x() / w.z(), v = w.y() / w.z();
    const double x = m.x() / m.z(), y = m.y() / m.z();
    a.row(2 * i + 0) << u, v, 1, 0, 0, 0, -x * u, -x * v, -x;
    a.row(2 * i + 1) << 0, 0, 0, u, v, 1, -y * u, -y * v, -y;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(8);
  if (residual)
    *residual = svd.singularValues()(8) / std::sqrt(static_cast<double>(2 * n));

  Eigen::Matrix3d h_norm;
  h_norm << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Eigen::Matrix3d result = t_image.inverse() * h_norm * t_world;
  if (std::abs(result(2, 2)) > 1e-12) result /= result(2, 2);
  return from_matrix(result);
}

GeoPoint Homography::image_to_world(double px, double py) const {
  const Eigen::Vector3d w = h_inv_ * Eigen::Vector3d(px, py, 1.0);
  if (std::abs(w.z()) < 1e-12)
    throw PointAtInfinity("pixel (" + std::to_string(px) + ", " +
                          std::to_string(py) +
                          ") lies outside the calibrated plane");
  return GeoPoint{w.x() / w.z(), w.y() / w.z()};
}

std::pair<double, double> Homography::world_to_image(const GeoPoint& g) const {
  const Eigen::Vector3d m = h_ * Eigen::Vector3d(g.lat, g.lon, 1.0);
  if (std::abs(m.z()) < 1e-12)
    throw PointAtInfinity("world point maps to infinity");
  return {m.x() / m.z(), m.y() / m.z()};
}

Calibration load_calibration(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("calibration file: ") + e.what());
  }

  try {
    if (doc.contains("H")) {
      const auto values = doc.at("H").get<std::vector<double>>();
      if (values.size() != 9)
        throw std::invalid_argument("calibration H needs 9 entries (row-major)");
      Eigen::Matrix3d h;
      h << values[0], values[1], values[2], values[3], values[4], values[5],
          values[6], values[7], values[8];
      return Calibration{Homography::from_matrix(h)};
    }

    if (doc.contains("points")) {
      std::vector<CalibrationPoint> points;
      for (const auto& item : doc.at("points")) {
        points.push_back({item.at("px").get<double>(),
                          item.at("py").get<double>(),
                          item.at("lat").get<double>(),
                          item.at("lon").get<double>()});
      }
      double residual = 0.0;
      Calibration cal{Homography::fit(points, &residual)};
      cal.fit_residual = residual;
      cal.fitted = true;
      cal.residual_warning = residual > kResidualWarnThreshold;
      return cal;
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("calibration file: ") + e.what());
  }

  throw std::invalid_argument("calibration file needs an \"H\" or \"points\" key");
}

Calibration load_calibration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open calibration file: " + path);
  return load_calibration(in);
}

}  // namespace crosswatch
