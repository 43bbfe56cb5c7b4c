#pragma once

#include <Eigen/Dense>

#include <crosswatch/detection.hpp>

namespace crosswatch {

struct KalmanParams {
  // Measurement noise variances for (x, y, s, r).
  double meas_xy = 1.0;
  double meas_s = 10.0;
  double meas_r = 0.01;
  // Process noise variances: tiny on the observed components, larger on
  // the velocities.
  double process_observed = 1e-4;
  double process_vxy = 0.25;
  double process_vs = 2.5;
  // Initial velocity variance (velocities start unknown).
  double initial_velocity_var = 1e3;
  // Area floor applied after prediction so s stays positive.
  double area_floor = 1e-4;
};

/// Constant-velocity box filter. State is
///   [x, y, s, r, vx, vy, vs]
/// with (x, y) the box center in pixels, s the box area, r the aspect
/// ratio w/h; velocities are per frame. Measurements are (x, y, s, r)
/// taken from an associated detection box.
class BoxKalmanFilter {
 public:
  using Params = KalmanParams;

  BoxKalmanFilter() : BoxKalmanFilter(BoundingBox{0.0, 0.0, 1.0, 1.0}) {}
  BoxKalmanFilter(const BoundingBox& initial, const Params& params = {});

  /// Advances the state one frame: x += vx, y += vy, s += vs (floored),
  /// r unchanged; covariance propagated through the motion model.
  void predict();

  /// Corrects the state with a measured box. Throws std::invalid_argument
  /// on a non-finite measurement.
  void update(const BoundingBox& measured);

  /// Box reconstructed from the (x, y, s, r) components.
  BoundingBox box() const;

  const Eigen::Matrix<double, 7, 1>& state() const { return x_; }
  const Eigen::Matrix<double, 7, 7>& covariance() const { return P_; }
  double vx() const { return x_(4); }
  double vy() const { return x_(5); }

 private:
  void clamp_shape();

  Params params_;
  Eigen::Matrix<double, 7, 1> x_;
  Eigen::Matrix<double, 7, 7> P_;
  Eigen::Matrix<double, 7, 7> F_;
  Eigen::Matrix<double, 7, 7> Q_;
  Eigen::Matrix<double, 4, 7> H_;
  Eigen::Matrix<double, 4, 4> R_;
};

}  // namespace crosswatch
