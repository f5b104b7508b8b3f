#pragma once

#include "thinfilm/reduced.hpp"

#include <vector>

namespace thinfilm {

/// One probed direction: the adjoint-gradient pairing against the best
/// central finite-difference quotient over the step sweep.
struct GradCheckDirection {
  int index = 0;
  double adjoint_value = 0.0;
  double fd_value = 0.0;
  double best_step = 0.0;
  double rel_error = 0.0;
  std::vector<std::pair<double, double>> sweep; ///< (step, rel_error)
};

struct GradCheckReport {
  std::vector<GradCheckDirection> directions;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Compares the assembled gradient at u_base against central finite
/// differences of the reduced objective in `n_directions` random
/// interior-node directions, sweeping the FD step over
/// {1e-4, ..., 1e-7} * (1 + max|u_base|) and keeping the best agreement per
/// direction. Deterministic for a fixed seed.
GradCheckReport gradient_check(const ReducedProblem& problem,
                               const Trajectory& u_base, int n_directions,
                               unsigned seed, double tolerance = 1e-4);

} // namespace thinfilm
