#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <crosswatch/geodesy.hpp>

namespace crosswatch {

/// A pixel mapped to its surveyed geographic location, used to fit the
/// calibration homography.
struct CalibrationPoint {
  double px = 0.0;
  double py = 0.0;
  double lat = 0.0;
  double lon = 0.0;
};

/// Raised when a pixel has no finite world image under the calibration
/// (homogeneous third component vanishes).
class PointAtInfinity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plane-to-plane projective map between geographic coordinates and image
/// pixels. The stored matrix takes (lat, lon, 1) to pixel coordinates; its
/// inverse takes pixels back to the world.
class Homography {
 public:
  /// Wraps a world-to-image matrix. Throws std::invalid_argument when the
  /// matrix is singular.
  static Homography from_matrix(const Eigen::Matrix3d& world_to_image);

  /// Least-squares DLT fit from at least 4 point correspondences. The RMS
  /// algebraic residual in normalized coordinates is written through
  /// `residual` when provided.
  static Homography fit(std::span<const CalibrationPoint> points,
                        double* residual = nullptr);

  GeoPoint image_to_world(double px, double py) const;
  std::pair<double, double> world_to_image(const GeoPoint& g) const;

  const Eigen::Matrix3d& matrix() const { return h_; }
  const Eigen::Matrix3d& inverse() const { return h_inv_; }

 private:
  Homography(const Eigen::Matrix3d& h, const Eigen::Matrix3d& h_inv)
      : h_(h), h_inv_(h_inv) {}

  Eigen::Matrix3d h_;
  Eigen::Matrix3d h_inv_;
};

struct Calibration {
  Homography homography;
  // Set when the calibration was fit from point pairs.
  double fit_residual = 0.0;
  bool fitted = false;
  bool residual_warning = false;
};

/// Reads a calibration file: either {"H": [9 floats row-major]} or
/// {"points": [{"px","py","lat","lon"} x >= 4]}. The latter triggers the
/// DLT fit; a normalized residual above 1e-6 sets the warning flag.
Calibration load_calibration(std::istream& in);
Calibration load_calibration_file(const std::string& path);

}  // namespace crosswatch
