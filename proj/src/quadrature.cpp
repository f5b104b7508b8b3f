#include "thinfilm/quadrature.hpp"

#include "thinfilm/errors.hpp"

#include <cmath>
#include <numbers>

namespace thinfilm {

// Nodes are the roots of the Legendre polynomial P_n on [-1, 1], found by
// Newton iteration from the Chebyshev-like initial guesses; weights from the
// standard 2 / ((1 - x^2) P_n'(x)^2) formula. Both are then mapped to [0, 1].
QuadratureRule QuadratureRule::gauss(int n_points) {
  if (n_points < 1)
    throw InvalidDomainError("QuadratureRule::gauss: need at least one point");

  QuadratureRule rule;
  rule.points.resize(n_points);
  rule.weights.resize(n_points);

  const int n = n_points;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Evaluate P_n and P_n' by the three-term recurrence.
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map from [-1, 1] to [0, 1]; the cosine guess enumerates roots in
    // descending order, store ascending.
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

} // namespace thinfilm
