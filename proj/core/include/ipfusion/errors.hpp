#pragma once

#include <stdexcept>

namespace ipfusion {

// Anchor geometry cannot support the requested solve (rank-deficient or
// ill-conditioned linear system).
struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Not enough measurements (and no prior) to constrain the solution.
struct InsufficientConstraints : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A factor noise covariance is not positive definite.
struct BadNoiseModel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Normal equations stay indefinite even at the damping ceiling; the window is
// unobservable as posed.
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ipfusion
