#pragma once

#include "ipfusion/types.hpp"

namespace ipfusion {

// Below this rotation angle the trigonometric coefficients of Rodrigues'
// formula and the SO(3) Jacobians switch to their second-order Taylor series.
inline constexpr double kSmallAngle = 1e-8;

Mat3 skew(const Vec3& v);

// 3D rotation. Stored as an orthonormal matrix; re-orthonormalized whenever
// accumulated drift exceeds 1e-12 so R^T R = I and det R = +1 always hold.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  // Projects a near-orthonormal matrix onto SO(3). Throws std::invalid_argument
  // if the input is not within 1e-6 of a proper rotation.
  static Rotation from_matrix(const Mat3& m);
  static Rotation from_quaternion(double w, double x, double y, double z);
  static Rotation identity() { return Rotation(); }

  const Mat3& matrix() const { return m_; }
  Rotation inverse() const { return Rotation(Mat3(m_.transpose())); }
  Rotation operator*(const Rotation& other) const;
  Vec3 operator*(const Vec3& p) const { return m_ * p; }

  bool is_approx(const Rotation& other, double tol = 1e-12) const {
    return (m_ - other.m_).lpNorm<Eigen::Infinity>() <= tol;
  }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  friend Rotation so3_exp(const Vec3&);
  Mat3 m_;
};

// Element of se(3): translational part rho (m), rotational part phi (rad).
struct Twist {
  Vec3 rho = Vec3::Zero();
  Vec3 phi = Vec3::Zero();
};

// Rigid transform: x_world = rotation * x_body + translation.
struct Pose {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return Pose{}; }
};

// Rodrigues' formula; angle ||phi|| about phi/||phi||.
Rotation so3_exp(const Vec3& phi);

// Principal-branch axis-angle vector, ||result|| <= pi. The theta -> 0 branch
// uses the quaternion series; at theta = pi the axis sign is canonicalized so
// its first nonzero component is positive.
Vec3 so3_log(const Rotation& r);

Mat3 so3_left_jacobian(const Vec3& phi);
Mat3 so3_left_jacobian_inverse(const Vec3& phi);
inline Mat3 so3_right_jacobian(const Vec3& phi) { return so3_left_jacobian(-phi); }
inline Mat3 so3_right_jacobian_inverse(const Vec3& phi) {
  return so3_left_jacobian_inverse(-phi);
}

Pose se3_exp(const Twist& xi);
Twist se3_log(const Pose& t);

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& a);
// act(a, p) = R_a * p + t_a.
Vec3 act(const Pose& a, const Vec3& p);

}  // namespace ipfusion
