#include "thinfilm/state.hpp"

#include "thinfilm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thinfilm {

void validate(const ModelParams& model) {
  if (!(model.lambda >= 0.0))
    throw InvalidDomainError("ModelParams: lambda must be >= 0");
  if (!(model.beta >= 1.0))
    throw InvalidDomainError("ModelParams: beta must be >= 1");
  if (!(model.eps >= 0.0))
    throw InvalidDomainError("ModelParams: eps must be >= 0");
}

NodalField initial_pressure(const NodalField& y0) {
  const BandedMatrix M = mass_matrix(y0.mesh);
  const BandedMatrix A = stiffness_matrix(y0.mesh);
  NodalField p0(y0.mesh);
  p0.values = solve_banded(M, A.multiply(y0.values));
  return p0;
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Shared machinery for one implicit step: precomputed mass/stiffness and the
// interleaved residual/Jacobian assembly.
struct StepAssembler {
  const Mesh1D mesh;
  const ModelParams model;
  const double k;
  const QuadratureRule quad;
  const bool split_sign;
  const BandedMatrix M;
  const BandedMatrix A;

  StepAssembler(const Mesh1D& mesh_, const ModelParams& model_, double k_,
                const FemOptions& opts)
      : mesh(mesh_), model(model_), k(k_),
        quad(QuadratureRule::gauss(opts.quad_points)),
        split_sign(opts.split_kinks), M(mass_matrix(mesh_)),
        A(stiffness_matrix(mesh_)) {}

  BandedMatrix mobility_stiffness(const NodalField& y) const {
    return field_weighted_stiffness(
        mesh, quad, y, [&](double v) { return mobility(model, v); },
        split_sign);
  }

  BandedMatrix coupling(const NodalField& y, const NodalField& p) const {
    return mobility_coupling(
        mesh, quad, y, p,
        [&](double v) { return mobility_derivative(model, v); }, split_sign);
  }

  // residual rows: 2i -> (1/k)(y - y_prev, phi) + (K(y) p, phi-grad) - b,
  //                2i+1 -> (y_x, phi_x) - (p, phi)
  std::vector<double> residual(const NodalField& y, const NodalField& p,
                               const NodalField& y_prev,
                               std::span<const double> forcing,
                               const BandedMatrix& K) const {
    const int nn = mesh.n_nodes();
    std::vector<double> dy(y.values);
    for (int i = 0; i < nn; ++i) dy[i] -= y_prev[i];
    const std::vector<double> m_dy = M.multiply(dy);
    const std::vector<double> kp = K.multiply(p.values);
    const std::vector<double> ay = A.multiply(y.values);
    const std::vector<double> mp = M.multiply(p.values);

    std::vector<double> r(static_cast<std::size_t>(2 * nn));
    for (int i = 0; i < nn; ++i) {
      r[2 * i] = m_dy[i] / k + kp[i] - forcing[i];
      r[2 * i + 1] = ay[i] - mp[i];
    }
    return r;
  }

  BandedMatrix jacobian(const BandedMatrix& K, const BandedMatrix& G) const {
    const int nn = mesh.n_nodes();
    BandedMatrix J(2 * nn, 3, 3);
    for (int i = 0; i < nn; ++i) {
      const int j0 = std::max(0, i - 1);
      const int j1 = std::min(nn - 1, i + 1);
      for (int j = j0; j <= j1; ++j) {
        J.ref(2 * i, 2 * j) = M.at(i, j) / k + G.at(i, j);
        J.ref(2 * i, 2 * j + 1) = K.at(i, j);
        J.ref(2 * i + 1, 2 * j) = A.at(i, j);
        J.ref(2 * i + 1, 2 * j + 1) = -M.at(i, j);
      }
    }
    return J;
  }

  StepResult solve(const NodalField& y_prev, const NodalField& p_guess,
                   std::span<const double> forcing,
                   const NewtonParams& newton) const {
    StepResult out;
    out.y = y_prev;
    out.p = p_guess;

    const int nn = mesh.n_nodes();
    for (int it = 0;; ++it) {
      const BandedMatrix K = mobility_stiffness(out.y);
      const std::vector<double> r =
          residual(out.y, out.p, y_prev, forcing, K);
      const double rnorm = norm2(r);
      if (!std::isfinite(rnorm))
        throw NewtonDivergedError("Newton residual is not finite");
      if (rnorm <= newton.tol) {
        out.iterations = it;
        out.residual_norm = rnorm;
        return out;
      }
      if (it >= newton.max_iter)
        throw NewtonDivergedError("Newton exceeded " +
                                  std::to_string(newton.max_iter) +
                                  " iterations, residual " +
                                  std::to_string(rnorm));

      const BandedMatrix G = coupling(out.y, out.p);
      std::vector<double> neg_r(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) neg_r[i] = -r[i];
      const std::vector<double> d = BandedLU(jacobian(K, G)).solve(neg_r);

      for (int i = 0; i < nn; ++i) {
        out.y[i] += d[2 * i];
        out.p[i] += d[2 * i + 1];
      }
      const double dnorm = norm2(d);
      out.step_norms.push_back(dnorm);
      if (dnorm <= newton.tol) {
        // Accepted by the consecutive-iterate rule; report the residual at
        // the updated state.
        const BandedMatrix K2 = mobility_stiffness(out.y);
        out.residual_norm =
            norm2(residual(out.y, out.p, y_prev, forcing, K2));
        out.iterations = it + 1;
        return out;
      }
    }
  }
};

} // namespace

NewtonSystem newton_step_system(const NodalField& y, const NodalField& p,
                                const NodalField& y_prev,
                                const NodalField& u_next,
                                const ModelParams& model, double k,
                                const QuadratureRule& quad, bool split_sign) {
  require_same_mesh(y, p, "newton_step_system");
  require_same_mesh(y, y_prev, "newton_step_system");
  require_same_mesh(y, u_next, "newton_step_system");

  FemOptions opts;
  opts.quad_points = quad.size();
  opts.split_kinks = split_sign;
  StepAssembler asmb(y.mesh, model, k, opts);
  const std::vector<double> forcing = control_forcing(u_next);
  const BandedMatrix K = asmb.mobility_stiffness(y);
  const BandedMatrix G = asmb.coupling(y, p);

  NewtonSystem sys;
  sys.residual = asmb.residual(y, p, y_prev, forcing, K);
  sys.jacobian = asmb.jacobian(K, G);
  return sys;
}

StepResult step(const NodalField& y_prev, const NodalField& p_guess,
                const NodalField& u_next, const ModelParams& model,
                const NewtonParams& newton, double k, const FemOptions& opts) {
  require_same_mesh(y_prev, p_guess, "step");
  require_same_mesh(y_prev, u_next, "step");
  StepAssembler asmb(y_prev.mesh, model, k, opts);
  return asmb.solve(y_prev, p_guess, control_forcing(u_next), newton);
}

std::optional<double> entropy(const NodalField& y, double beta,
                              const QuadratureRule& quad) {
  if (!(beta > 2.0)) return std::nullopt;
  if (!(y.min_value() > 0.0)) return std::nullopt;
  double s = 0.0;
  for (int e = 0; e < y.mesh.n_space; ++e) {
    const double yl = y[e], yr = y[e + 1];
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      s += quad.weights[q] * pow_abs(yl * (1.0 - xi) + yr * xi, 2.0 - beta);
    }
  }
  s *= y.mesh.h;
  return s / ((beta - 1.0) * (beta - 2.0));
}

namespace {

LevelDiagnostics level_diagnostics(const NodalField& y, double time,
                                   double beta, const QuadratureRule& quad,
                                   int newton_iterations) {
  LevelDiagnostics d;
  d.time = time;
  d.mass = integral(y);
  d.energy = energy(y);
  d.entropy = entropy(y, beta, quad);
  d.min_value = y.min_value();
  d.newton_iterations = newton_iterations;
  return d;
}

} // namespace

ForwardResult solve_forward(const NodalField& y0, const Trajectory& u,
                            const ModelParams& model, const TimeGrid& tg,
                            const NewtonParams& newton,
                            const FemOptions& opts) {
  validate(model);
  if (!(u.grid == tg))
    throw GridMismatchError("solve_forward: control grid mismatch");
  require_same_mesh(y0, u.levels.front(), "solve_forward");
  for (const NodalField& level : u.levels)
    if (level.values.front() != 0.0 || level.values.back() != 0.0)
      throw InvalidDomainError(
          "solve_forward: control must vanish at the boundary nodes");

  StepAssembler asmb(y0.mesh, model, tg.k, opts);

  ForwardResult out;
  out.y = Trajectory(y0.mesh, tg);
  out.p = Trajectory(y0.mesh, tg);
  out.diagnostics.reserve(tg.n_levels());

  out.y[0] = y0;
  out.p[0] = initial_pressure(y0);
  out.diagnostics.push_back(
      level_diagnostics(y0, 0.0, model.beta, asmb.quad, 0));

  for (int n = 0; n < tg.n_time; ++n) {
    try {
      StepResult sr = asmb.solve(out.y[n], out.p[n],
                                 control_forcing(u[n + 1]), newton);
      out.y[n + 1] = std::move(sr.y);
      out.p[n + 1] = std::move(sr.p);
      out.diagnostics.push_back(level_diagnostics(
          out.y[n + 1], tg.time(n + 1), model.beta, asmb.quad, sr.iterations));
    } catch (const NewtonDivergedError& e) {
      throw NewtonDivergedError(std::string(e.what()) + " (step " +
                                    std::to_string(n) + ")",
                                n);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(std::string(e.what()) + " (step " +
                                    std::to_string(n) + ")",
                                n);
    }
  }
  return out;
}

} // namespace thinfilm
