#include "thinfilm/objective.hpp"

#include "thinfilm/assembly.hpp"
#include "thinfilm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace thinfilm {

void validate(const ObjectiveParams& obj) {
  if (!(obj.alpha > 0.0))
    throw InvalidDomainError("ObjectiveParams: alpha must be > 0");
  if (!(obj.gamma >= 0.0))
    throw InvalidDomainError("ObjectiveParams: gamma must be >= 0");
}

double l2_norm_sq(const NodalField& v) {
  double s = 0.0;
  for (int e = 0; e < v.mesh.n_space; ++e) {
    const double vl = v[e], vr = v[e + 1];
    s += vl * vl + vl * vr + vr * vr;
  }
  return s * v.mesh.h / 3.0;
}

namespace {

double euclidean_norm_sq(const NodalField& v) {
  double s = 0.0;
  for (double x : v.values) s += x * x;
  return s;
}

double euclidean_diff_norm_sq(const NodalField& a, const NodalField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double l2_diff_norm_sq(const NodalField& a, const NodalField& b) {
  double s = 0.0;
  for (int e = 0; e < a.mesh.n_space; ++e) {
    const double vl = a[e] - b[e], vr = a[e + 1] - b[e + 1];
    s += vl * vl + vl * vr + vr * vr;
  }
  return s * a.mesh.h / 3.0;
}

// |u_x|^2 as a function norm (integral of the squared piecewise-constant
// derivative) or as a plain coefficient norm of the slope vector.
double slope_norm_sq(const NodalField& u, NormMode mode) {
  double s = 0.0;
  for (int e = 0; e < u.mesh.n_space; ++e) {
    const double dy = u[e + 1] - u[e];
    s += dy * dy;
  }
  s /= u.mesh.h * u.mesh.h;
  return mode == NormMode::l2 ? s * u.mesh.h : s;
}

double penalty_coeff_norm_sq(const NodalField& y, double c0) {
  double s = 0.0;
  for (double v : y.values) {
    const double g = std::max(c0 - v, 0.0);
    s += g * g;
  }
  return s;
}

} // namespace

ObjectiveValue eval_objective(const Trajectory& y, const Trajectory& u,
                              const Trajectory& ytilde,
                              const ObjectiveParams& obj, const TimeGrid& tg,
                              const FemOptions& opts) {
  validate(obj);
  if (!(y.grid == tg) || !(u.grid == tg) || !(ytilde.grid == tg))
    throw GridMismatchError("eval_objective: trajectory grid mismatch");
  require_same_layout(y, u, "eval_objective");
  require_same_layout(y, ytilde, "eval_objective");

  const bool l2 = obj.norm_mode == NormMode::l2;
  const QuadratureRule quad = QuadratureRule::gauss(opts.quad_points);
  const Mesh1D& mesh = y.mesh();

  double tracking = 0.0, control = 0.0, penalty = 0.0;
  for (std::size_t n = 0; n < y.n_levels(); ++n) {
    tracking += l2 ? l2_diff_norm_sq(y[n], ytilde[n])
                   : euclidean_diff_norm_sq(y[n], ytilde[n]);
    control += slope_norm_sq(u[n], obj.norm_mode);
    if (obj.gamma > 0.0)
      penalty += l2 ? penalty_integral(mesh, quad, y[n], obj.c0,
                                       opts.split_kinks)
                    : penalty_coeff_norm_sq(y[n], obj.c0);
  }

  ObjectiveValue val;
  val.tracking = 0.5 * tg.k * tracking;
  val.control = 0.5 * obj.alpha * tg.k * control;
  val.penalty = obj.gamma > 0.0 ? 0.5 * tg.k / obj.gamma * penalty : 0.0;
  val.total = val.tracking + val.control + val.penalty;
  return val;
}

Trajectory assemble_gradient(const Trajectory& u, const Trajectory& z,
                             const ObjectiveParams& obj, const TimeGrid& tg) {
  validate(obj);
  if (!(u.grid == tg) || !(z.grid == tg))
    throw GridMismatchError("assemble_gradient: trajectory grid mismatch");
  require_same_layout(u, z, "assemble_gradient");

  const Mesh1D& mesh = u.mesh();
  const BandedMatrix A = stiffness_matrix(mesh);
  // In euclidean mode |u_x|^2 is the plain slope-vector norm, i.e. the
  // function seminorm scaled by 1/h.
  const double cu = obj.norm_mode == NormMode::l2
                        ? obj.alpha * tg.k
                        : obj.alpha * tg.k / mesh.h;

  Trajectory g(mesh, tg);
  for (std::size_t n = 0; n < u.n_levels(); ++n) {
    const std::vector<double> au = A.multiply(u[n].values);
    for (std::size_t i = 0; i < g[n].size(); ++i) g[n][i] = cu * au[i];
    if (n > 0) {
      const std::vector<double> pairing = derivative_pairing(z[n - 1]);
      for (std::size_t i = 0; i < g[n].size(); ++i)
        g[n][i] -= tg.k * pairing[i];
    }
    g[n].zero_boundary();
  }
  return g;
}

double grad_norm_sq(const Trajectory& g, NormMode mode) {
  double s = 0.0;
  for (const NodalField& level : g.levels)
    s += mode == NormMode::l2 ? g.grid.k * l2_norm_sq(level)
                              : euclidean_norm_sq(level);
  return s;
}

Trajectory gradient_representative(const Trajectory& g) {
  const Mesh1D& mesh = g.mesh();
  const int ni = mesh.n_nodes() - 2; // interior nodes
  const BandedMatrix M = mass_matrix(mesh);
  BandedMatrix M_int(ni, 1, 1);
  for (int i = 0; i < ni; ++i)
    for (int j = std::max(0, i - 1); j <= std::min(ni - 1, i + 1); ++j)
      M_int.ref(i, j) = M.at(i + 1, j + 1);
  const BandedLU lu(M_int);

  Trajectory d(mesh, g.grid);
  std::vector<double> rhs(static_cast<std::size_t>(ni));
  for (std::size_t n = 0; n < g.n_levels(); ++n) {
    for (int i = 0; i < ni; ++i) rhs[i] = g[n][i + 1];
    const std::vector<double> x = lu.solve(rhs);
    for (int i = 0; i < ni; ++i) d[n][i + 1] = x[i] / g.grid.k;
  }
  return d;
}

double penalty_violation(const Trajectory& y, double c0,
                         const FemOptions& opts) {
  const QuadratureRule quad = QuadratureRule::gauss(opts.quad_points);
  double s = 0.0;
  for (const NodalField& level : y.levels)
    s += penalty_integral(y.mesh(), quad, level, c0, /*split_kinks=*/true);
  return std::sqrt(y.grid.k * s);
}

} // namespace thinfilm
