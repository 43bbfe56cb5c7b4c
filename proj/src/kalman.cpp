#include <crosswatch/kalman.hpp>

#include <cmath>
#include <stdexcept>

namespace crosswatch {

namespace {

Eigen::Vector4d measurement_from_box(const BoundingBox& box) {
  return {box.x, box.y, box.area(), box.aspect()};
}

}  // namespace

BoxKalmanFilter::BoxKalmanFilter(const BoundingBox& initial,
                                 const Params& params)
    : params_(params) {
  const auto z = measurement_from_box(initial);
  if (!z.allFinite() || z(2) <= 0.0 || z(3) <= 0.0)
    throw std::invalid_argument("invalid initial box");

  x_.setZero();
  x_.head<4>() = z;

  F_.setIdentity();
  F_(0, 4) = 1.0;
  F_(1, 5) = 1.0;
  F_(2, 6) = 1.0;

  H_.setZero();
  H_.block<4, 4>(0, 0).setIdentity();

  R_ = Eigen::Vector4d(params.meas_xy, params.meas_xy, params.meas_s,
                       params.meas_r)
           .asDiagonal();

  Eigen::Matrix<double, 7, 1> q;
  q << params.process_observed, params.process_observed,
      params.process_observed, params.process_observed, params.process_vxy,
      params.process_vxy, params.process_vs;
  Q_ = q.asDiagonal();

  Eigen::Matrix<double, 7, 1> p0;
  p0 << params.meas_xy, params.meas_xy, params.meas_s, params.meas_r,
      params.initial_velocity_var, params.initial_velocity_var,
      params.initial_velocity_var;
  P_ = p0.asDiagonal();
}

void BoxKalmanFilter::clamp_shape() {
  if (x_(2) < params_.area_floor) x_(2) = params_.area_floor;
  if (x_(3) < params_.area_floor) x_(3) = params_.area_floor;
}

void BoxKalmanFilter::predict() {
  x_ = F_ * x_;
  clamp_shape();
  P_ = F_ * P_ * F_.transpose() + Q_;
}

void BoxKalmanFilter::update(const BoundingBox& measured) {
  const auto z = measurement_from_box(measured);
  if (!z.allFinite()) throw std::invalid_argument("non-finite measurement");

  const Eigen::Vector4d innovation = z - H_ * x_;
  const Eigen::Matrix4d S = H_ * P_ * H_.transpose() + R_;
  const Eigen::Matrix<double, 7, 4> K =
      P_ * H_.transpose() * S.llt().solve(Eigen::Matrix4d::Identity());
  x_ += K * innovation;
  P_ = (Eigen::Matrix<double, 7, 7>::Identity() - K * H_) * P_;
  P_ = 0.5 * (P_ + P_.transpose()).eval();  // keep symmetric
  clamp_shape();
}

BoundingBox BoxKalmanFilter::box() const {
  const double s = x_(2);
  const double r = x_(3);
  const double w = std::sqrt(s * r);
  const double h = s / w;
  return BoundingBox{x_(0), x_(1), w, h};
}

}  // namespace crosswatch
