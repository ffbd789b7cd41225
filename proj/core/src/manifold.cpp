#include "ipfusion/manifold.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>

namespace ipfusion {

namespace {

Mat3 orthonormalize(const Mat3& m) {
  Eigen::Quaterniond q(m);
  q.normalize();
  return q.toRotationMatrix();
}

double orthonormality_drift(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).lpNorm<Eigen::Infinity>();
}

}  // namespace

Mat3 skew(const Vec3& v) {
  Mat3 s;
  // clang-format off
  s <<    0.0, -v.z(),  v.y(),
        v.z(),    0.0, -v.x(),
       -v.y(),  v.x(),    0.0;
  // clang-format on
  return s;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!m.allFinite() || orthonormality_drift(m) > 1e-6 || m.determinant() < 0.0) {
    throw std::invalid_argument("Rotation::from_matrix: input is not a proper rotation");
  }
  return Rotation(orthonormalize(m));
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  Eigen::Quaterniond q(w, x, y, z);
  q.normalize();
  return Rotation(q.toRotationMatrix());
}

Rotation Rotation::operator*(const Rotation& other) const {
  Mat3 m = m_ * other.m_;
  if (orthonormality_drift(m) > 1e-12) m = orthonormalize(m);
  return Rotation(m);
}

Rotation so3_exp(const Vec3& phi) {
  const double theta_sq = phi.squaredNorm();
  double a, b;  // sin(t)/t, (1-cos(t))/t^2
  if (theta_sq < kSmallAngle * kSmallAngle) {
    a = 1.0 - theta_sq / 6.0;
    b = 0.5 - theta_sq / 24.0;
  } else {
    const double theta = std::sqrt(theta_sq);
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta_sq;
  }
  const Mat3 w = skew(phi);
  return Rotation(Mat3(Mat3::Identity() + a * w + b * w * w));
}

Vec3 so3_log(const Rotation& r) {
  Eigen::Quaterniond q(r.matrix());
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Vec3 qv = q.vec();
  const double s = qv.norm();  // sin(theta/2)
  const double c = q.w();      // cos(theta/2), >= 0

  if (s < kSmallAngle) {
    // phi = 2 qv / c * (1 - s^2 / (3 c^2)), second-order in s.
    return qv * (2.0 / c) * (1.0 - s * s / (3.0 * c * c));
  }
  const double theta = 2.0 * std::atan2(s, c);
  Vec3 axis = qv / s;
  if (M_PI - theta < 1e-9) {
    // Branch boundary: pick the axis whose first nonzero component is positive.
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > 1e-9) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return theta * axis;
}

Mat3 so3_left_jacobian(const Vec3& phi) {
  const double theta_sq = phi.squaredNorm();
  double b, c;  // (1-cos t)/t^2, (t-sin t)/t^3
  if (theta_sq < kSmallAngle * kSmallAngle) {
    b = 0.5 - theta_sq / 24.0;
    c = 1.0 / 6.0 - theta_sq / 120.0;
  } else {
    const double theta = std::sqrt(theta_sq);
    b = (1.0 - std::cos(theta)) / theta_sq;
    c = (theta - std::sin(theta)) / (theta_sq * theta);
  }
  const Mat3 w = skew(phi);
  return Mat3::Identity() + b * w + c * w * w;
}

Mat3 so3_left_jacobian_inverse(const Vec3& phi) {
  const double theta_sq = phi.squaredNorm();
  double d;  // 1/t^2 - (1+cos t)/(2 t sin t)
  if (theta_sq < kSmallAngle * kSmallAngle) {
    d = 1.0 / 12.0 + theta_sq / 720.0;
  } else {
    const double theta = std::sqrt(theta_sq);
    d = 1.0 / theta_sq - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  const Mat3 w = skew(phi);
  return Mat3::Identity() - 0.5 * w + d * w * w;
}

Pose se3_exp(const Twist& xi) {
  Pose t;
  t.rotation = so3_exp(xi.phi);
  t.translation = so3_left_jacobian(xi.phi) * xi.rho;
  return t;
}

Twist se3_log(const Pose& t) {
  Twist xi;
  xi.phi = so3_log(t.rotation);
  xi.rho = so3_left_jacobian_inverse(xi.phi) * t.translation;
  return xi;
}

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose inverse(const Pose& a) {
  Pose out;
  out.rotation = a.rotation.inverse();
  out.translation = -(out.rotation * a.translation);
  return out;
}

Vec3 act(const Pose& a, const Vec3& p) { return a.rotation * p + a.translation; }

}  // namespace ipfusion
