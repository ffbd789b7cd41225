#include "ipfusion/imu.hpp"

#include <cmath>
#include <stdexcept>

namespace ipfusion {

PreintegratedImu::PreintegratedImu(const ImuBias& bias_lin_point,
                                   const ImuNoiseModel& noise)
    : bias_lin_(bias_lin_point), noise_(noise) {}

void PreintegratedImu::integrate(const ImuSample& sample, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("PreintegratedImu::integrate: dt must be positive and finite");
  }

  const Vec3 w = sample.gyro - bias_lin_.gyro;
  const Vec3 a = sample.accel - bias_lin_.accel;
  const Vec3 wdt = w * dt;

  const Rotation r_inc = so3_exp(wdt);
  const Mat3 jr = so3_right_jacobian(wdt);
  const Mat3& dR = delta_R_.matrix();
  const Mat3 a_hat = skew(a);

  // First-order transition of (dtheta, dv, dp) and injection of the sample's
  // white noise (variance sigma^2/dt for zero-order-hold sampling).
  Mat9 f = Mat9::Identity();
  f.block<3, 3>(0, 0) = r_inc.matrix().transpose();
  f.block<3, 3>(3, 0) = -dR * a_hat * dt;
  f.block<3, 3>(6, 0) = -0.5 * dR * a_hat * dt * dt;
  f.block<3, 3>(6, 3) = Mat3::Identity() * dt;

  Eigen::Matrix<double, 9, 6> g = Eigen::Matrix<double, 9, 6>::Zero();
  g.block<3, 3>(0, 0) = jr * dt;
  g.block<3, 3>(3, 3) = dR * dt;
  g.block<3, 3>(6, 3) = 0.5 * dR * dt * dt;

  Mat6 q = Mat6::Zero();
  q.diagonal().head<3>().setConstant(noise_.sigma_g * noise_.sigma_g / dt);
  q.diagonal().tail<3>().setConstant(noise_.sigma_a * noise_.sigma_a / dt);

  cov_ = f * cov_ * f.transpose() + g * q * g.transpose();

  // Bias Jacobians before the delta update (they use the pre-update dR).
  dp_dbg_ += dv_dbg_ * dt - 0.5 * dR * a_hat * dR_dbg_ * dt * dt;
  dp_dba_ += dv_dba_ * dt - 0.5 * dR * dt * dt;
  dv_dbg_ -= dR * a_hat * dR_dbg_ * dt;
  dv_dba_ -= dR * dt;
  dR_dbg_ = r_inc.matrix().transpose() * dR_dbg_ - jr * dt;

  delta_p_ += delta_v_ * dt + 0.5 * dR * a * dt * dt;
  delta_v_ += dR * a * dt;
  delta_R_ = delta_R_ * r_inc;
  dt_total_ += dt;
  ++num_samples_;
}

Rotation PreintegratedImu::corrected_delta_R(const ImuBias& bias) const {
  const Vec3 dbg = bias.gyro - bias_lin_.gyro;
  return delta_R_ * so3_exp(dR_dbg_ * dbg);
}

Vec3 PreintegratedImu::corrected_delta_v(const ImuBias& bias) const {
  return delta_v_ + dv_dbg_ * (bias.gyro - bias_lin_.gyro) +
         dv_dba_ * (bias.accel - bias_lin_.accel);
}

Vec3 PreintegratedImu::corrected_delta_p(const ImuBias& bias) const {
  return delta_p_ + dp_dbg_ * (bias.gyro - bias_lin_.gyro) +
         dp_dba_ * (bias.accel - bias_lin_.accel);
}

NavState predict(const NavState& state_i, const PreintegratedImu& pre,
                 const Vec3& gravity) {
  const double dt = pre.dt_total();
  const Rotation& ri = state_i.pose.rotation;

  NavState out;
  out.pose.rotation = ri * pre.corrected_delta_R(state_i.bias);
  out.velocity = state_i.velocity + gravity * dt + ri * pre.corrected_delta_v(state_i.bias);
  out.pose.translation = state_i.pose.translation + state_i.velocity * dt +
                         0.5 * gravity * dt * dt + ri * pre.corrected_delta_p(state_i.bias);
  out.bias = state_i.bias;
  return out;
}

Vec9 preintegration_residual(const NavState& state_i, const NavState& state_j,
                             const PreintegratedImu& pre, const Vec3& gravity) {
  const double dt = pre.dt_total();
  const Mat3 ri_t = state_i.pose.rotation.matrix().transpose();

  const Rotation dR = pre.corrected_delta_R(state_i.bias);
  const Vec3 dv = pre.corrected_delta_v(state_i.bias);
  const Vec3 dp = pre.corrected_delta_p(state_i.bias);

  Vec9 r;
  r.head<3>() = so3_log(dR.inverse() * state_i.pose.rotation.inverse() *
                        state_j.pose.rotation);
  r.segment<3>(3) =
      ri_t * (state_j.velocity - state_i.velocity - gravity * dt) - dv;
  r.tail<3>() = ri_t * (state_j.pose.translation - state_i.pose.translation -
                        state_i.velocity * dt - 0.5 * gravity * dt * dt) -
                dp;
  return r;
}

}  // namespace ipfusion
