#pragma once

#include <Eigen/Core>

namespace ipfusion {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat15 = Eigen::Matrix<double, 15, 15>;
using MatX = Eigen::MatrixXd;

// Speed of light, m/s. Converts UWB arrival-time differences to range differences.
inline constexpr double kSpeedOfLight = 299792458.0;

// Per-state tangent layout used by every factor Jacobian and by the error-state
// filter: [dtheta(0:3), dpos(3:6), dvel(6:9), dbias_gyro(9:12), dbias_accel(12:15)].
// Pose perturbation is on the right: T * exp(xi) with xi = (rho=dpos, phi=dtheta).
inline constexpr int kThetaOfs = 0;
inline constexpr int kPosOfs = 3;
inline constexpr int kVelOfs = 6;
inline constexpr int kBgOfs = 9;
inline constexpr int kBaOfs = 12;
inline constexpr int kStateDim = 15;

}  // namespace ipfusion
