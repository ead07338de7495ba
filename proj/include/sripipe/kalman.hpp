// SPDX-License-Identifier: Apache-2.0
// Constant-velocity Kalman filter over box state (cx, cy, w, h, velocities).
#pragma once

#include <Eigen/Dense>

#include "sripipe/geometry.hpp"

namespace sripipe {

struct KalmanState {
  Eigen::Matrix<double, 8, 1> mean = Eigen::Matrix<double, 8, 1>::Zero();
  Eigen::Matrix<double, 8, 8> covariance =
      Eigen::Matrix<double, 8, 8>::Identity();

  BBox bbox() const {
    return BBox::from_center(mean(0), mean(1), mean(2), mean(3));
  }
};

// Noise scaling weights shared by init, predict, and update. All standard
// deviations scale with the current box height.
inline constexpr double kKfPositionWeight = 1.0 / 20.0;
inline constexpr double kKfVelocityWeight = 1.0 / 160.0;

KalmanState kf_init(const BBox& box);
KalmanState kf_predict(const KalmanState& state);
KalmanState kf_update(const KalmanState& state, const BBox& measured);

}  // namespace sripipe
