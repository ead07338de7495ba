// SPDX-License-Identifier: Apache-2.0
#include "sripipe/kalman.hpp"

#include <algorithm>

#include "sripipe/errors.hpp"

namespace sripipe {

namespace {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat48 = Eigen::Matrix<double, 4, 8>;

constexpr double kMinExtent = 1e-3;

Mat8 transition() {
  Mat8 f = Mat8::Identity();
  for (int i = 0; i < 4; ++i) f(i, i + 4) = 1.0;
  return f;
}

Vec8 noise_stds(double h, double pos_factor, double vel_factor) {
  Vec8 stds;
  const double pos = pos_factor * kKfPositionWeight * h;
  const double vel = vel_factor * kKfVelocityWeight * h;
  stds << pos, pos, pos, pos, vel, vel, vel, vel;
  return stds;
}

}  // namespace

KalmanState kf_init(const BBox& box) {
  if (!(box.w > 0.0) || !(box.h > 0.0))
    fail(Errc::bad_box, "cannot initialize filter from a box with size " +
                            std::to_string(box.w) + "x" +
                            std::to_string(box.h));
  KalmanState state;
  state.mean << box.cx(), box.cy(), box.w, box.h, 0.0, 0.0, 0.0, 0.0;
  const Vec8 stds = noise_stds(box.h, 2.0, 10.0);
  state.covariance = stds.cwiseProduct(stds).asDiagonal();
  return state;
}

KalmanState kf_predict(const KalmanState& state) {
  const double h = std::max(state.mean(3), kMinExtent);
  const Vec8 stds = noise_stds(h, 1.0, 1.0);
  const Mat8 f = transition();

  KalmanState next;
  next.mean = f * state.mean;
  next.covariance = f * state.covariance * f.transpose();
  next.covariance += Mat8(stds.cwiseProduct(stds).asDiagonal());
  next.covariance = ((next.covariance + next.covariance.transpose()) / 2.0).eval();
  return next;
}

KalmanState kf_update(const KalmanState& state, const BBox& measured) {
  if (!(measured.w > 0.0) || !(measured.h > 0.0))
    fail(Errc::bad_box, "measurement needs positive width and height");

  const double h = std::max(state.mean(3), kMinExtent);
  const double meas_std = kKfPositionWeight * h;
  const Mat4 r = Mat4::Identity() * (meas_std * meas_std);

  Mat48 obs = Mat48::Zero();
  obs.leftCols<4>() = Mat4::Identity();

  const Mat4 innovation_cov =
      obs * state.covariance * obs.transpose() + r;
  const Eigen::LLT<Mat4> llt(innovation_cov);
  if (llt.info() != Eigen::Success)
    fail(Errc::numerical_failure,
         "innovation covariance is not positive definite");

  // Gain via the Cholesky solve of S K^T = H P.
  const Eigen::Matrix<double, 8, 4> gain =
      llt.solve(obs * state.covariance).transpose();

  Vec4 z;
  z << measured.cx(), measured.cy(), measured.w, measured.h;
  const Vec4 innovation = z - obs * state.mean;

  KalmanState next;
  next.mean = state.mean + gain * innovation;
  next.mean(2) = std::max(next.mean(2), kMinExtent);
  next.mean(3) = std::max(next.mean(3), kMinExtent);

  // Joseph form keeps the posterior symmetric positive definite.
  const Mat8 closure = Mat8::Identity() - gain * obs;
  next.covariance = closure * state.covariance * closure.transpose() +
                    gain * r * gain.transpose();
  next.covariance = ((next.covariance + next.covariance.transpose()) / 2.0).eval();
  return next;
}

}  // namespace sripipe
