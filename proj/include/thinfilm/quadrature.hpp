#pragma once

#include <vector>

namespace thinfilm {

/// Gauss-Legendre rule on the reference element [0, 1]. Weights sum to 1;
/// an n-point rule integrates polynomials of degree <= 2n-1 exactly.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }

  static QuadratureRule gauss(int n_points);
};

} // namespace thinfilm
