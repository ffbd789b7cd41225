#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ipfusion/types.hpp"

namespace ipfusion {

// Fixed transceivers at surveyed positions. reference_id names the common
// anchor all TDoA pairs are formed against.
struct AnchorSet {
  std::vector<int> ids;
  std::vector<Vec3> positions;
  int reference_id = 0;

  bool has(int id) const;
  const Vec3& position_of(int id) const;  // throws std::out_of_range
  std::size_t size() const { return ids.size(); }
};

// Range difference ||p - a_i|| - ||p - a_j|| observed as c * dt_ij.
struct TdoaMeasurement {
  double t = 0.0;
  int anchor_i = 0;
  int anchor_j = 0;
  double delta_d = 0.0;  // m
  double sigma = 0.1;    // m, 1-sigma
};

struct UltrasonicRange {
  double t = 0.0;
  int anchor_id = 0;
  double range = 0.0;  // m, > 0
  double sigma = 0.02;
};

// ||p - a_i|| - ||p - a_j|| - delta_d. Throws std::out_of_range on unknown ids.
double tdoa_residual(const Vec3& p, const TdoaMeasurement& m,
                     const AnchorSet& anchors);

// Feasibility gate: |delta_d| <= ||a_i - a_j|| + 3 sigma.
bool tdoa_feasible(const TdoaMeasurement& m, const AnchorSet& anchors);

// Linear closed-form position from absolute ranges: pairwise sphere
// differences against the reference anchor, solved via the normal equations.
// Requires ranges from >= 4 anchors including the reference; throws
// DegenerateGeometry when the linearized system is rank-deficient or its
// normal matrix has condition number >= 1e12.
Vec3 spherical_intersection(const std::vector<std::pair<int, double>>& ranges,
                            const AnchorSet& anchors);

// Gauss-Newton minimization of sum (||p - a_k|| - d_k)^2, seeded at the prior
// (or the anchor centroid when no prior is given). With fewer than 4 ranges
// the solve is regularized toward the prior. At most 20 iterations, stops on
// step norm < 1e-9 m. Throws InsufficientConstraints when no ranges and no
// prior constrain the solution.
Vec3 ultrasonic_init(const std::vector<UltrasonicRange>& ranges,
                     const AnchorSet& anchors,
                     const std::optional<Vec3>& prior = std::nullopt);

// Huber penalty: r^2/2 for |r| <= delta, else delta*|r| - delta^2/2.
double huber(double r, double delta);
// IRLS weight rho'(r)/r: 1 in the quadratic regime, delta/|r| in the tails.
double huber_weight(double r, double delta);

struct RobustSolveResult {
  Vec3 position = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();
  int iterations = 0;
  bool converged = false;
};

// IRLS/Gauss-Newton on Huber-weighted TDoA residuals (delta in meters, on the
// raw residual). Returns the estimate and the first-order covariance
// (J^T W J)^-1 with W carrying both measurement sigmas and robust weights.
// Throws InsufficientConstraints for < 3 measurements and DegenerateGeometry
// when the normal matrix is not invertible; after 50 iterations the best
// iterate is returned with converged = false.
RobustSolveResult robust_solve(const std::vector<TdoaMeasurement>& tdoas,
                               const Vec3& init, const AnchorSet& anchors,
                               double delta);

}  // namespace ipfusion
