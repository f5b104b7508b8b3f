#pragma once

#include "thinfilm/assembly.hpp"
#include "thinfilm/banded.hpp"
#include "thinfilm/mesh.hpp"
#include "thinfilm/quadrature.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace thinfilm {

/// Physical parameters of the mobility lambda*|y|^beta + eps and the
/// state-constraint level c0.
struct ModelParams {
  double lambda = 1.0;
  double beta = 3.0;
  double eps = 0.0;
  double c0 = 0.0;
};

/// Throws InvalidDomainError unless lambda >= 0, beta >= 1, eps >= 0.
void validate(const ModelParams& model);

/// Discretization knobs shared by assembly-heavy operations.
struct FemOptions {
  int quad_points = 5;      ///< Gauss points per element (exact to degree 9)
  bool split_kinks = false; ///< split elements at kinks of (c0 - y)^+
};

inline double pow_abs(double y, double p) {
  const double a = std::abs(y);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (p == 4.0) {
    const double s = a * a;
    return s * s;
  }
  return std::pow(a, p);
}

inline double mobility(const ModelParams& m, double y) {
  return m.lambda * pow_abs(y, m.beta) + m.eps;
}

/// d/dy of the mobility: lambda*beta*|y|^(beta-1)*sign(y). The sign factor
/// keeps the derivative exact when iterates go negative; it vanishes at 0.
inline double mobility_derivative(const ModelParams& m, double y) {
  if (y == 0.0) return 0.0;
  return std::copysign(m.lambda * m.beta * pow_abs(y, m.beta - 1.0), y);
}

/// Newton stopping parameters: stop when the residual or the difference of
/// two consecutive iterates drops below tol.
struct NewtonParams {
  double tol = 1e-10;
  int max_iter = 1000;
};

/// Pressure consistent with y0: solves (p, phi) = (y0_x, phi_x) for all phi,
/// i.e. M p = A y0.
NodalField initial_pressure(const NodalField& y0);

/// Residual and exact Jacobian of one implicit step, at state (y, p) with
/// previous level y_prev and forcing control level u_next. Unknowns are
/// interleaved per node as (y_i, p_i); row 2i is the evolution equation
/// tested with phi_i, row 2i+1 the mixed equation (y_x, phi_x) = (p, phi).
struct NewtonSystem {
  std::vector<double> residual;
  BandedMatrix jacobian;
};

NewtonSystem newton_step_system(const NodalField& y, const NodalField& p,
                                const NodalField& y_prev,
                                const NodalField& u_next,
                                const ModelParams& model, double k,
                                const QuadratureRule& quad,
                                bool split_sign = false);

struct StepResult {
  NodalField y;
  NodalField p;
  int iterations = 0;          ///< number of linear solves
  double residual_norm = 0.0;  ///< Euclidean residual at the accepted state
  std::vector<double> step_norms; ///< |delta| per Newton update
};

/// One implicit step solved by Newton's method with exact derivatives,
/// started from (y_prev, p_guess). Throws NewtonDivergedError when the
/// iteration budget is exhausted, SingularMatrixError from the linear solve.
StepResult step(const NodalField& y_prev, const NodalField& p_guess,
                const NodalField& u_next, const ModelParams& model,
                const NewtonParams& newton, double k,
                const FemOptions& opts = {});

/// Per-level diagnostics of a forward solve. The entropy is reported only
/// when beta > 2 and the level is strictly positive at every node.
struct LevelDiagnostics {
  double time = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  std::optional<double> entropy;
  double min_value = 0.0;
  int newton_iterations = 0;
};

struct ForwardResult {
  Trajectory y;
  Trajectory p;
  std::vector<LevelDiagnostics> diagnostics;
};

/// Runs the implicit scheme over the whole time grid. u must live on the
/// same grid with zero boundary values at every level; step n consumes
/// u(t_{n+1}). Solver failures are rethrown with the failing step index.
ForwardResult solve_forward(const NodalField& y0, const Trajectory& u,
                            const ModelParams& model, const TimeGrid& tg,
                            const NewtonParams& newton,
                            const FemOptions& opts = {});

/// Entropy functional 1/((beta-1)(beta-2)) * integral of y^(2-beta);
/// nullopt unless beta > 2 and y > 0 nodewise.
std::optional<double> entropy(const NodalField& y, double beta,
                              const QuadratureRule& quad);

} // namespace thinfilm
