#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thinfilm/adjoint.hpp"
#include "thinfilm/assembly.hpp"
#include "thinfilm/state.hpp"

#include "support/oracles.hpp"

#include <cmath>
#include <random>

using namespace thinfilm;

namespace {

NodalField bump_field(const Mesh1D& mesh, double floor = 0.2) {
  NodalField y(mesh);
  const double mid = 0.5 * (mesh.a + mesh.b);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    const double t = mesh.node(i) - mid;
    y[i] = floor + std::exp(-2.0 * t * t);
  }
  return y;
}

} // namespace

TEST_CASE("adjoint operator is the transpose of the state jacobian") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 8);
  const QuadratureRule quad = QuadratureRule::gauss(5);
  ModelParams model;
  model.eps = 0.07;
  const double k = 0.02;

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  NodalField y = bump_field(mesh), p(mesh);
  for (auto& v : p.values) v = unit(rng);
  for (auto& v : y.values) v += 0.3 * unit(rng); // include negative parts

  for (bool split : {false, true}) {
    const BandedMatrix J =
        newton_step_system(y, p, y, NodalField(mesh), model, k, quad, split)
            .jacobian;
    const BandedMatrix Jt = adjoint_system_matrix(y, p, model, k, quad, split);
    for (int i = 0; i < J.n; ++i)
      for (int j = 0; j < J.n; ++j)
        CHECK(std::abs(Jt.at(i, j) - J.at(j, i)) <= 1e-12);
  }
}

TEST_CASE("zero sources produce zero multipliers") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 10);
  ModelParams model;
  model.eps = 0.1;
  ObjectiveParams obj;
  obj.gamma = 0.0;
  const NodalField y = bump_field(mesh);
  const NodalField p = initial_pressure(y);

  const AdjointLevel lvl =
      adjoint_step(NodalField(mesh), y, p, y, model, obj, 0.01);
  for (double v : lvl.z.values) CHECK(std::abs(v) <= 1e-14);
  for (double v : lvl.s.values) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("multipliers are linear in the tracking residual") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 10);
  ModelParams model;
  model.eps = 0.1;
  ObjectiveParams obj;
  obj.gamma = 0.0;
  const NodalField y = bump_field(mesh);
  const NodalField p = initial_pressure(y);

  NodalField target = y;
  for (int i = 0; i < mesh.n_nodes(); ++i)
    target[i] += 0.1 * std::sin(3.0 * mesh.node(i));

  NodalField target_scaled = y;
  const double c = -2.5;
  for (int i = 0; i < mesh.n_nodes(); ++i)
    target_scaled[i] += c * (target[i] - y[i]);

  const AdjointLevel base =
      adjoint_step(NodalField(mesh), y, p, target, model, obj, 0.01);
  const AdjointLevel scaled =
      adjoint_step(NodalField(mesh), y, p, target_scaled, model, obj, 0.01);
  for (int i = 0; i < mesh.n_nodes(); ++i) {
    CHECK(scaled.z[i] == doctest::Approx(c * base.z[i]).epsilon(1e-11));
    CHECK(scaled.s[i] == doctest::Approx(c * base.s[i]).epsilon(1e-11));
  }
}

TEST_CASE("perfect tracking gives identically zero multipliers") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 12);
  const TimeGrid tg = build_time_grid(0.1, 20);
  ModelParams model;
  model.eps = 0.1;
  ObjectiveParams obj;
  obj.gamma = 0.0;

  const ForwardResult fr = solve_forward(bump_field(mesh), Trajectory(mesh, tg),
                                         model, tg, NewtonParams{});
  const AdjointResult adj =
      solve_backward(fr.y, fr.p, fr.y, model, obj, tg);
  for (const auto& level : adj.z.levels)
    for (double v : level.values) CHECK(std::abs(v) <= 1e-11);
}

TEST_CASE("terminal multiplier level is exactly zero") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 10);
  const TimeGrid tg = build_time_grid(0.05, 5);
  ModelParams model;
  model.eps = 0.1;
  ObjectiveParams obj;

  const ForwardResult fr = solve_forward(bump_field(mesh), Trajectory(mesh, tg),
                                         model, tg, NewtonParams{});
  Trajectory target(mesh, tg); // zero target: nontrivial sources
  const AdjointResult adj =
      solve_backward(fr.y, fr.p, target, model, obj, tg);
  for (double v : adj.z[tg.n_time].values) CHECK(v == 0.0);
  bool nonzero = false;
  for (double v : adj.z[0].values) nonzero |= (v != 0.0);
  CHECK(nonzero);
}

TEST_CASE("one-step adjoint agrees with a dense monolithic solve") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 6);
  const TimeGrid tg = build_time_grid(0.02, 1);
  const QuadratureRule quad = QuadratureRule::gauss(5);
  ModelParams model;
  model.eps = 0.1;
  ObjectiveParams obj;
  obj.gamma = 0.02;
  obj.c0 = 0.45;

  const NodalField y0 = bump_field(mesh, 0.3);
  Trajectory u(mesh, tg);
  for (int i = 1; i < mesh.n_space; ++i) u[1][i] = 0.2 * std::sin(2.0 * i);
  NewtonParams newton;
  newton.tol = 1e-13;
  const ForwardResult fr = solve_forward(y0, u, model, tg, newton);

  Trajectory target(mesh, tg);
  for (auto& level : target.levels)
    for (int i = 0; i < mesh.n_nodes(); ++i) level[i] = 0.5;

  const AdjointResult adj =
      solve_backward(fr.y, fr.p, target, model, obj, tg);

  // Dense path: transpose of the dense Newton matrix at the converged state,
  // sources assembled densely.
  const int nn = mesh.n_nodes();
  const oracle::Dense Jt = oracle::transpose(oracle::dense_step_jacobian(
      mesh, quad, fr.y[1], fr.p[1], model, tg.k));
  const oracle::Dense M = oracle::dense_mass(mesh, quad);

  std::vector<double> source(static_cast<std::size_t>(nn), 0.0);
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < nn; ++j)
      source[i] += M[i][j] * (target[1][j] - fr.y[1][j]);
  }
  const std::vector<double> q =
      penalty_source(mesh, quad, fr.y[1], obj.c0, false);
  for (int i = 0; i < nn; ++i) source[i] += q[i] / obj.gamma;

  std::vector<double> rhs(static_cast<std::size_t>(2 * nn), 0.0);
  for (int i = 0; i < nn; ++i) rhs[2 * i] = source[i]; // z_next = 0
  const std::vector<double> x = oracle::dense_solve(Jt, rhs);

  std::vector<double> z_ref(nn), s_ref(nn);
  for (int i = 0; i < nn; ++i) {
    z_ref[i] = x[2 * i];
    s_ref[i] = x[2 * i + 1];
  }
  CHECK(oracle::rel_diff(adj.z[0].values, z_ref) <= 1e-10);
  CHECK(oracle::rel_diff(adj.s[0].values, s_ref) <= 1e-10);
}
