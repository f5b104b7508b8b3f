#include "thinfilm/adjoint.hpp"

#include "thinfilm/assembly.hpp"
#include "thinfilm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thinfilm {

namespace {

struct AdjointAssembler {
  const Mesh1D mesh;
  const ModelParams model;
  const ObjectiveParams obj;
  const double k;
  const QuadratureRule quad;
  const bool split_kinks;
  const BandedMatrix M;
  const BandedMatrix A;

  AdjointAssembler(const Mesh1D& mesh_, const ModelParams& model_,
                   const ObjectiveParams& obj_, double k_,
                   const FemOptions& opts)
      : mesh(mesh_), model(model_), obj(obj_), k(k_),
        quad(QuadratureRule::gauss(opts.quad_points)),
        split_kinks(opts.split_kinks), M(mass_matrix(mesh_)),
        A(stiffness_matrix(mesh_)) {}

  // Transpose of the state Newton Jacobian: the coupling block moves to its
  // transposed position, the symmetric blocks swap places.
  BandedMatrix system_matrix(const NodalField& y, const NodalField& p) const {
    const BandedMatrix K = field_weighted_stiffness(
        mesh, quad, y, [&](double v) { return mobility(model, v); },
        split_kinks);
    const BandedMatrix G = mobility_coupling(
        mesh, quad, y, p,
        [&](double v) { return mobility_derivative(model, v); }, split_kinks);
    const int nn = mesh.n_nodes();
    BandedMatrix J(2 * nn, 3, 3);
    for (int i = 0; i < nn; ++i) {
      const int j0 = std::max(0, i - 1);
      const int j1 = std::min(nn - 1, i + 1);
      for (int j = j0; j <= j1; ++j) {
        J.ref(2 * i, 2 * j) = M.at(i, j) / k + G.at(j, i);
        J.ref(2 * i, 2 * j + 1) = A.at(i, j);
        J.ref(2 * i + 1, 2 * j) = K.at(i, j);
        J.ref(2 * i + 1, 2 * j + 1) = -M.at(i, j);
      }
    }
    return J;
  }

  // Per-level objective derivative: tracking residual plus penalty source.
  std::vector<double> source(const NodalField& y,
                             const NodalField& ytilde) const {
    const int nn = mesh.n_nodes();
    std::vector<double> s(static_cast<std::size_t>(nn), 0.0);
    if (obj.norm_mode == NormMode::l2) {
      std::vector<double> diff(static_cast<std::size_t>(nn));
      for (int i = 0; i < nn; ++i) diff[i] = ytilde[i] - y[i];
      s = M.multiply(diff);
      if (obj.gamma > 0.0) {
        const std::vector<double> q =
            penalty_source(mesh, quad, y, obj.c0, split_kinks);
        for (int i = 0; i < nn; ++i) s[i] += q[i] / obj.gamma;
      }
    } else {
      for (int i = 0; i < nn; ++i) s[i] = ytilde[i] - y[i];
      if (obj.gamma > 0.0)
        for (int i = 0; i < nn; ++i)
          s[i] += std::max(obj.c0 - y[i], 0.0) / obj.gamma;
    }
    return s;
  }

  AdjointLevel solve_level(const NodalField& z_next, const NodalField& y,
                           const NodalField& p,
                           const NodalField& ytilde) const {
    const int nn = mesh.n_nodes();
    const std::vector<double> mz = M.multiply(z_next.values);
    const std::vector<double> s = source(y, ytilde);

    std::vector<double> rhs(static_cast<std::size_t>(2 * nn), 0.0);
    for (int i = 0; i < nn; ++i) rhs[2 * i] = mz[i] / k + s[i];

    const std::vector<double> x = BandedLU(system_matrix(y, p)).solve(rhs);
    AdjointLevel out{NodalField(mesh), NodalField(mesh)};
    for (int i = 0; i < nn; ++i) {
      out.z[i] = x[2 * i];
      out.s[i] = x[2 * i + 1];
    }
    return out;
  }
};

} // namespace

BandedMatrix adjoint_system_matrix(const NodalField& y_next,
                                   const NodalField& p_next,
                                   const ModelParams& model, double k,
                                   const QuadratureRule& quad,
                                   bool split_sign) {
  FemOptions opts;
  opts.quad_points = quad.size();
  opts.split_kinks = split_sign;
  AdjointAssembler asmb(y_next.mesh, model, ObjectiveParams{}, k, opts);
  return asmb.system_matrix(y_next, p_next);
}

AdjointLevel adjoint_step(const NodalField& z_next, const NodalField& y_next,
                          const NodalField& p_next,
                          const NodalField& ytilde_next,
                          const ModelParams& model, const ObjectiveParams& obj,
                          double k, const FemOptions& opts) {
  require_same_mesh(z_next, y_next, "adjoint_step");
  require_same_mesh(y_next, p_next, "adjoint_step");
  require_same_mesh(y_next, ytilde_next, "adjoint_step");
  AdjointAssembler asmb(y_next.mesh, model, obj, k, opts);
  return asmb.solve_level(z_next, y_next, p_next, ytilde_next);
}

AdjointResult solve_backward(const Trajectory& y, const Trajectory& p,
                             const Trajectory& ytilde,
                             const ModelParams& model,
                             const ObjectiveParams& obj, const TimeGrid& tg,
                             const FemOptions& opts) {
  validate(obj);
  if (!(y.grid == tg))
    throw GridMismatchError("solve_backward: state grid mismatch");
  require_same_layout(y, p, "solve_backward");
  require_same_layout(y, ytilde, "solve_backward");

  AdjointAssembler asmb(y.mesh(), model, obj, tg.k, opts);

  AdjointResult out;
  out.z = Trajectory(y.mesh(), tg);
  out.s = Trajectory(y.mesh(), tg);
  // Terminal condition: z at the final level vanishes; s is never used there.
  for (int n = tg.n_time - 1; n >= 0; --n) {
    try {
      AdjointLevel lvl = asmb.solve_level(out.z[n + 1], y[n + 1], p[n + 1],
                                          ytilde[n + 1]);
      out.z[n] = std::move(lvl.z);
      out.s[n] = std::move(lvl.s);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(std::string(e.what()) + " (backward level " +
                                    std::to_string(n) + ")",
                                n);
    }
  }
  return out;
}

} // namespace thinfilm
