#include "ipfusion/tdoa.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ipfusion/errors.hpp"

namespace ipfusion {

bool AnchorSet::has(int id) const {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

const Vec3& AnchorSet::position_of(int id) const {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (ids[k] == id) return positions[k];
  }
  throw std::out_of_range("AnchorSet: unknown anchor id " + std::to_string(id));
}

double tdoa_residual(const Vec3& p, const TdoaMeasurement& m,
                     const AnchorSet& anchors) {
  const Vec3& ai = anchors.position_of(m.anchor_i);
  const Vec3& aj = anchors.position_of(m.anchor_j);
  return (p - ai).norm() - (p - aj).norm() - m.delta_d;
}

bool tdoa_feasible(const TdoaMeasurement& m, const AnchorSet& anchors) {
  const double baseline =
      (anchors.position_of(m.anchor_i) - anchors.position_of(m.anchor_j)).norm();
  return std::abs(m.delta_d) <= baseline + 3.0 * m.sigma;
}

Vec3 spherical_intersection(const std::vector<std::pair<int, double>>& ranges,
                            const AnchorSet& anchors) {
  if (ranges.size() < 4) {
    throw InsufficientConstraints("spherical_intersection: need ranges from >= 4 anchors");
  }
  const int ref = anchors.reference_id;
  const auto ref_it = std::find_if(ranges.begin(), ranges.end(),
                                   [&](const auto& r) { return r.first == ref; });
  if (ref_it == ranges.end()) {
    throw InsufficientConstraints("spherical_intersection: reference anchor range missing");
  }
  const Vec3& a_ref = anchors.position_of(ref);
  const double d_ref = ref_it->second;

  MatX a(static_cast<int>(ranges.size()) - 1, 3);
  VecX b(a.rows());
  int row = 0;
  for (const auto& [id, d] : ranges) {
    if (id == ref) continue;
    const Vec3& aj = anchors.position_of(id);
    a.row(row) = 2.0 * (aj - a_ref).transpose();
    b(row) = d_ref * d_ref - d * d + aj.squaredNorm() - a_ref.squaredNorm();
    ++row;
  }

  const Mat3 ata = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Mat3> eig(ata);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo >= 1e12) {
    throw DegenerateGeometry("spherical_intersection: anchor geometry is rank-deficient");
  }
  return ata.ldlt().solve(a.transpose() * b);
}

Vec3 ultrasonic_init(const std::vector<UltrasonicRange>& ranges,
                     const AnchorSet& anchors, const std::optional<Vec3>& prior) {
  if (ranges.empty()) {
    if (!prior) {
      throw InsufficientConstraints("ultrasonic_init: no ranges and no prior");
    }
    return *prior;
  }

  Vec3 p;
  if (prior) {
    p = *prior;
  } else {
    p = Vec3::Zero();
    for (const auto& r : ranges) p += anchors.position_of(r.anchor_id);
    p /= static_cast<double>(ranges.size());
  }

  const bool regularize = prior && ranges.size() < 4;
  const double prior_weight = 1e-2;  // (1 m / sigma)^2 with sigma = 10 m

  for (int iter = 0; iter < 20; ++iter) {
    Mat3 h = Mat3::Zero();
    Vec3 g = Vec3::Zero();
    for (const auto& r : ranges) {
      const Vec3 diff = p - anchors.position_of(r.anchor_id);
      const double dist = diff.norm();
      if (dist < 1e-12) continue;  // gradient undefined exactly at the anchor
      const Vec3 u = diff / dist;
      const double res = dist - r.range;
      h += u * u.transpose();
      g += u * res;
    }
    if (regularize) {
      h += prior_weight * Mat3::Identity();
      g += prior_weight * (p - *prior);
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(h);
    if (eig.eigenvalues().minCoeff() <= 1e-12) {
      throw DegenerateGeometry("ultrasonic_init: normal matrix is singular");
    }
    const Vec3 step = -h.ldlt().solve(g);
    p += step;
    if (step.norm() < 1e-9) break;
  }
  return p;
}

double huber(double r, double delta) {
  const double a = std::abs(r);
  return a <= delta ? 0.5 * r * r : delta * a - 0.5 * delta * delta;
}

double huber_weight(double r, double delta) {
  const double a = std::abs(r);
  return a <= delta ? 1.0 : delta / a;
}

RobustSolveResult robust_solve(const std::vector<TdoaMeasurement>& tdoas,
                               const Vec3& init, const AnchorSet& anchors,
                               double delta) {
  if (tdoas.size() < 3) {
    throw InsufficientConstraints("robust_solve: need >= 3 TDoA pairs for 3D");
  }

  RobustSolveResult out;
  out.position = init;

  Mat3 h = Mat3::Zero();
  for (int iter = 0; iter < 50; ++iter) {
    h.setZero();
    Vec3 g = Vec3::Zero();
    for (const auto& m : tdoas) {
      const Vec3& ai = anchors.position_of(m.anchor_i);
      const Vec3& aj = anchors.position_of(m.anchor_j);
      const Vec3 di = out.position - ai;
      const Vec3 dj = out.position - aj;
      const double ni = di.norm();
      const double nj = dj.norm();
      if (ni < 1e-12 || nj < 1e-12) continue;
      const double res = ni - nj - m.delta_d;
      const Vec3 jrow = di / ni - dj / nj;
      const double w = huber_weight(res, delta) / (m.sigma * m.sigma);
      h += w * jrow * jrow.transpose();
      g += w * jrow * res;
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(h);
    if (eig.eigenvalues().minCoeff() <= 1e-12) {
      throw DegenerateGeometry("robust_solve: TDoA geometry is degenerate");
    }
    const Vec3 step = -h.ldlt().solve(g);
    out.position += step;
    out.iterations = iter + 1;
    if (step.norm() < 1e-10) {
      out.converged = true;
      break;
    }
  }
  out.covariance = h.inverse();
  return out;
}

}  // namespace ipfusion
