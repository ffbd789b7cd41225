#pragma once

#include "ipfusion/manifold.hpp"
#include "ipfusion/types.hpp"

namespace ipfusion {

// One IMU sample: specific force (body frame, m/s^2) and angular rate
// (body frame, rad/s). Timestamps are strictly increasing within a stream.
struct ImuSample {
  double t = 0.0;
  Vec3 accel = Vec3::Zero();
  Vec3 gyro = Vec3::Zero();
};

struct ImuBias {
  Vec3 gyro = Vec3::Zero();   // rad/s
  Vec3 accel = Vec3::Zero();  // m/s^2
};

// White-noise densities and bias random-walk densities (continuous time).
struct ImuNoiseModel {
  double sigma_g = 1e-3;   // rad/s/sqrt(Hz)
  double sigma_a = 1e-2;   // m/s^2/sqrt(Hz)
  double sigma_bg = 1e-5;  // rad/s * sqrt(Hz), gyro bias walk
  double sigma_ba = 1e-4;  // m/s^2 * sqrt(Hz), accel bias walk
};

// Full per-keyframe estimation state.
struct NavState {
  Pose pose;
  Vec3 velocity = Vec3::Zero();  // world frame, m/s
  ImuBias bias;
};

// Relative-motion accumulation of IMU samples between two keyframes, with a
// 9x9 covariance over (dtheta, dv, dp) and first-order bias Jacobians taken
// at a fixed bias linearization point. Zero-order hold between timestamps.
class PreintegratedImu {
 public:
  explicit PreintegratedImu(const ImuBias& bias_lin_point = {},
                            const ImuNoiseModel& noise = {});

  // Accumulates one sample held constant over dt. Throws std::invalid_argument
  // on non-positive or non-finite dt.
  void integrate(const ImuSample& sample, double dt);

  const Rotation& delta_R() const { return delta_R_; }
  const Vec3& delta_v() const { return delta_v_; }
  const Vec3& delta_p() const { return delta_p_; }
  double dt_total() const { return dt_total_; }
  const ImuBias& bias_lin_point() const { return bias_lin_; }
  const ImuNoiseModel& noise_model() const { return noise_; }
  const Mat9& covariance() const { return cov_; }
  int num_samples() const { return num_samples_; }

  const Mat3& dR_dbg() const { return dR_dbg_; }
  const Mat3& dv_dbg() const { return dv_dbg_; }
  const Mat3& dv_dba() const { return dv_dba_; }
  const Mat3& dp_dbg() const { return dp_dbg_; }
  const Mat3& dp_dba() const { return dp_dba_; }

  // Deltas corrected to first order for a bias differing from the
  // linearization point.
  Rotation corrected_delta_R(const ImuBias& bias) const;
  Vec3 corrected_delta_v(const ImuBias& bias) const;
  Vec3 corrected_delta_p(const ImuBias& bias) const;

 private:
  Rotation delta_R_;
  Vec3 delta_v_ = Vec3::Zero();
  Vec3 delta_p_ = Vec3::Zero();
  double dt_total_ = 0.0;
  int num_samples_ = 0;
  ImuBias bias_lin_;
  ImuNoiseModel noise_;
  Mat9 cov_ = Mat9::Zero();
  Mat3 dR_dbg_ = Mat3::Zero();
  Mat3 dv_dbg_ = Mat3::Zero();
  Mat3 dv_dba_ = Mat3::Zero();
  Mat3 dp_dbg_ = Mat3::Zero();
  Mat3 dp_dba_ = Mat3::Zero();
};

// Forward motion model: R_j = R_i dR, v_j = v_i + g dt + R_i dv,
// p_j = p_i + v_i dt + 1/2 g dt^2 + R_i dp. Deltas are bias-corrected to
// state_i's bias.
NavState predict(const NavState& state_i, const PreintegratedImu& pre,
                 const Vec3& gravity);

// Stacked (rotation-log, velocity, position) residual in frame i, with
// first-order bias correction of the measured deltas.
Vec9 preintegration_residual(const NavState& state_i, const NavState& state_j,
                             const PreintegratedImu& pre, const Vec3& gravity);

}  // namespace ipfusion
