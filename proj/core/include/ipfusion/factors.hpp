#pragma once

#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ipfusion/imu.hpp"
#include "ipfusion/tdoa.hpp"
#include "ipfusion/types.hpp"

namespace ipfusion {

// Tangent-space conventions shared by the optimizer, the factors, and the
// error-state filter. Per-state tangent is 15-dim in the order
// (dtheta, dpos, dvel, dbias_gyro, dbias_accel); the pose moves by the right
// perturbation T * se3_exp({rho = dpos, phi = dtheta}).
using StateTangent = Eigen::Matrix<double, kStateDim, 1>;

NavState retract(const NavState& s, const StateTangent& delta);

// Split local coordinates of `s` around `ref`:
// (log(R_ref^T R), R_ref^T (t - t_ref), v - v_ref, bg - bg_ref, ba - ba_ref).
// Equals the retraction tangent to first order and exactly at ref itself.
StateTangent local_coords(const NavState& s, const NavState& ref);

// Jacobian of local_coords(s, ref) w.r.t. the right perturbation of s.
// Identity when s == ref.
Mat15 local_coords_jacobian(const NavState& s, const NavState& ref);

enum class FactorKind { ImuPreint, Tdoa, UltrasonicRange, Elevation, Prior, BiasWalk };

struct TdoaFactorPayload {
  Vec3 anchor_i = Vec3::Zero();
  Vec3 anchor_j = Vec3::Zero();
  double delta_d = 0.0;
};

struct UltrasonicFactorPayload {
  Vec3 anchor = Vec3::Zero();
  double range = 0.0;
};

// Height constraint n^T (t - anchor_pos) = floor_height_delta.
struct ElevationConstraint {
  Vec3 anchor_pos = Vec3::Zero();
  double floor_height_delta = 0.0;
  Vec3 normal = Vec3(0.0, 0.0, 1.0);  // unit
};

struct ImuFactorPayload {
  std::shared_ptr<const PreintegratedImu> pre;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
};

struct BiasWalkPayload {
  double dt = 0.0;
};

// Gaussian prior from marginalization: residual(dx) = h * dx + b where dx
// stacks local_coords of each connected state around lin_states. h is the
// symmetric PSD square-root information; the factor noise is identity.
struct PriorPayload {
  MatX h;
  VecX b;
  std::vector<NavState> lin_states;
};

using FactorPayload =
    std::variant<TdoaFactorPayload, UltrasonicFactorPayload, ElevationConstraint,
                 ImuFactorPayload, BiasWalkPayload, PriorPayload>;

// One measurement constraint: residual + analytic Jacobians + noise model.
struct Factor {
  FactorKind kind = FactorKind::Tdoa;
  std::vector<int> connected_state_indices;
  MatX noise;  // covariance, symmetric positive definite
  FactorPayload payload;
  // Huber delta applied to the whitened residual norm; factors without it are
  // plain quadratic.
  std::optional<double> robust;

  int residual_dim() const;
};

Factor make_tdoa_factor(int state_index, const TdoaMeasurement& m,
                        const AnchorSet& anchors,
                        std::optional<double> robust_delta_whitened = std::nullopt);
Factor make_ultrasonic_factor(int state_index, const UltrasonicRange& m,
                              const AnchorSet& ultrasonic_anchors);
Factor make_elevation_factor(int state_index, const ElevationConstraint& c,
                             double sigma);
Factor make_imu_factor(int state_i, int state_j,
                       std::shared_ptr<const PreintegratedImu> pre,
                       const Vec3& gravity);
Factor make_bias_walk_factor(int state_i, int state_j, double dt,
                             const ImuNoiseModel& noise);
Factor make_prior_factor(std::vector<int> state_indices, MatX h, VecX b,
                         std::vector<NavState> lin_states);

struct FactorEvaluation {
  VecX residual;
  std::vector<MatX> jacobians;  // one (dim x 15) block per connected state
};

// Residual and analytic Jacobians at the given window slice. Throws
// std::invalid_argument when connected indices fall outside the slice.
FactorEvaluation evaluate(const Factor& f, std::span<const NavState> states);

struct WhitenedEvaluation {
  VecX residual;
  std::vector<MatX> jacobians;
  double robust_weight = 1.0;
};

// Multiplies by the inverse Cholesky factor of the noise; when a robust delta
// is set, additionally scales residual and Jacobians by sqrt of the Huber IRLS
// weight of the whitened norm. Throws BadNoiseModel if the noise is not PD.
WhitenedEvaluation whiten(const Factor& f, const FactorEvaluation& eval);

// The factor's contribution to the optimization objective: squared whitened
// norm for quadratic factors, 2 * huber(norm) for robust ones (so both agree
// in the quadratic regime).
double objective_contribution(const Factor& f, const FactorEvaluation& eval);

}  // namespace ipfusion
