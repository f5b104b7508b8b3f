#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "thinfilm/errors.hpp"
#include "thinfilm/gradcheck.hpp"
#include "thinfilm/objective.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/reduced.hpp"

#include <cmath>
#include <random>

using namespace thinfilm;

namespace {

ProblemSetup coarse_setup(double gamma, NormMode mode) {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 10);
  const TimeGrid tg = build_time_grid(1.0, 20);
  ProblemSetup setup;
  setup.y0 = realize_field(
      ProfileSpec{ProfileKind::gaussian_bump, 1.0, 0.2, 2.5,
                  0.7071067811865476, "", false},
      mesh);
  setup.ytilde = realize_target(
      ProfileSpec{ProfileKind::gaussian_bump, 1.0, 0.2, 1.5,
                  0.7071067811865476, "", false},
      mesh, tg);
  setup.model.eps = 0.1;
  setup.model.c0 = 0.5;
  setup.objective.gamma = gamma;
  setup.objective.c0 = 0.5;
  setup.objective.norm_mode = mode;
  setup.time_grid = tg;
  return setup;
}

} // namespace

TEST_CASE("objective vanishes for perfect tracking without control") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 4);
  const TimeGrid tg = build_time_grid(1.0, 3);
  Trajectory y(mesh, tg);
  for (auto& level : y.levels)
    for (auto& v : level.values) v = 0.7;
  ObjectiveParams obj;
  const ObjectiveValue val =
      eval_objective(y, Trajectory(mesh, tg), y, obj, tg);
  CHECK(val.total == 0.0);
  CHECK(val.tracking == 0.0);
  CHECK(val.control == 0.0);
  CHECK(val.penalty == 0.0);
}

TEST_CASE("penalty term of a fully violating state has a closed form") {
  // Mesh [0,1], n_space = 2, k = 0.5, y = 0, c0 = 1, gamma = 0.25:
  // (k / 2 gamma) * 3 levels * |1|^2_{L2} = 1 * 3 * 1 = 3.
  const Mesh1D mesh = build_mesh(0.0, 1.0, 2);
  const TimeGrid tg = build_time_grid(1.0, 2);
  const Trajectory y(mesh, tg); // identically zero
  ObjectiveParams obj;
  obj.gamma = 0.25;
  obj.c0 = 1.0;
  const ObjectiveValue val =
      eval_objective(y, Trajectory(mesh, tg), y, obj, tg);
  CHECK(val.penalty == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(val.tracking == 0.0);
  CHECK(val.total == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("control term is quadratic in the control") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 8);
  const TimeGrid tg = build_time_grid(1.0, 4);
  Trajectory u(mesh, tg);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto& level : u.levels) {
    for (auto& v : level.values) v = unit(rng);
    level.zero_boundary();
  }
  Trajectory u2 = u;
  add_scaled(u2, 1.0, u); // doubled

  const Trajectory y(mesh, tg);
  ObjectiveParams obj;
  for (NormMode mode : {NormMode::l2, NormMode::euclidean}) {
    obj.norm_mode = mode;
    const double c1 = eval_objective(y, u, y, obj, tg).control;
    const double c2 = eval_objective(y, u2, y, obj, tg).control;
    CHECK(c2 == doctest::Approx(4.0 * c1).epsilon(1e-13));
  }
}

TEST_CASE("objective components are non-negative") {
  const ProblemSetup setup = coarse_setup(0.02, NormMode::l2);
  const ReducedProblem problem(setup);
  Trajectory u = problem.zero_control();
  for (std::size_t n = 0; n < u.n_levels(); ++n) u[n][3] = 0.2;
  const ForwardResult fr = problem.forward(u);
  const ObjectiveValue val = problem.objective_of(fr, u);
  CHECK(val.tracking >= 0.0);
  CHECK(val.control > 0.0);
  CHECK(val.penalty >= 0.0);
  CHECK(val.total ==
        doctest::Approx(val.tracking + val.control + val.penalty));
}

TEST_CASE("gradient vanishes for zero control and zero multiplier") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 8);
  const TimeGrid tg = build_time_grid(1.0, 5);
  const Trajectory g = assemble_gradient(Trajectory(mesh, tg),
                                         Trajectory(mesh, tg),
                                         ObjectiveParams{}, tg);
  for (const auto& level : g.levels)
    for (double v : level.values) CHECK(v == 0.0);
}

TEST_CASE("gradient assembly is jointly linear in control and multiplier") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 8);
  const TimeGrid tg = build_time_grid(1.0, 6);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_traj = [&](bool boundary_zero) {
    Trajectory t(mesh, tg);
    for (auto& level : t.levels) {
      for (auto& v : level.values) v = unit(rng);
      if (boundary_zero) level.zero_boundary();
    }
    return t;
  };
  const Trajectory u1 = random_traj(true), u2 = random_traj(true);
  const Trajectory z1 = random_traj(false), z2 = random_traj(false);
  Trajectory u12 = u1, z12 = z1;
  add_scaled(u12, 1.0, u2);
  add_scaled(z12, 1.0, z2);

  ObjectiveParams obj;
  const Trajectory ga = assemble_gradient(u12, z12, obj, tg);
  const Trajectory g1 = assemble_gradient(u1, z1, obj, tg);
  const Trajectory g2 = assemble_gradient(u2, z2, obj, tg);
  for (std::size_t n = 0; n < ga.n_levels(); ++n)
    for (std::size_t i = 0; i < ga[n].size(); ++i)
      CHECK(ga[n][i] ==
            doctest::Approx(g1[n][i] + g2[n][i]).epsilon(1e-12));

  // Dirichlet rows stay pinned to zero.
  for (const auto& level : ga.levels) {
    CHECK(level.values.front() == 0.0);
    CHECK(level.values.back() == 0.0);
  }
}

TEST_CASE("grad_norm_sq scaling and unit impulse") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 8);
  const TimeGrid tg = build_time_grid(1.0, 4);
  Trajectory g(mesh, tg);
  CHECK(grad_norm_sq(g, NormMode::l2) == 0.0);
  CHECK(grad_norm_sq(g, NormMode::euclidean) == 0.0);

  g[2][3] = 1.0;
  CHECK(grad_norm_sq(g, NormMode::euclidean) == doctest::Approx(1.0));

  Trajectory g3 = g;
  add_scaled(g3, 2.0, g); // scaled by 3
  CHECK(grad_norm_sq(g3, NormMode::euclidean) ==
        doctest::Approx(9.0 * grad_norm_sq(g, NormMode::euclidean)));
  CHECK(grad_norm_sq(g3, NormMode::l2) ==
        doctest::Approx(9.0 * grad_norm_sq(g, NormMode::l2)).epsilon(1e-13));
}

TEST_CASE("gradient representative reproduces the coefficient pairing") {
  const Mesh1D mesh = build_mesh(0.0, 5.0, 9);
  const TimeGrid tg = build_time_grid(1.0, 5);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Trajectory g(mesh, tg);
  for (auto& level : g.levels) {
    for (auto& v : level.values) v = unit(rng);
    level.zero_boundary();
  }
  const Trajectory d = gradient_representative(g);
  for (const auto& level : d.levels) {
    CHECK(level.values.front() == 0.0);
    CHECK(level.values.back() == 0.0);
  }
  // <g, d>_euclid equals the k-weighted mass norm of d.
  double pairing = 0.0;
  for (std::size_t n = 0; n < g.n_levels(); ++n)
    for (std::size_t i = 0; i < g[n].size(); ++i)
      pairing += g[n][i] * d[n][i];
  CHECK(pairing ==
        doctest::Approx(grad_norm_sq(d, NormMode::l2)).epsilon(1e-12));
}

TEST_CASE("adjoint gradient matches finite differences in all modes") {
  for (NormMode mode : {NormMode::l2, NormMode::euclidean})
    for (double gamma : {0.0, 0.02}) {
      CAPTURE(static_cast<int>(mode));
      CAPTURE(gamma);
      const ReducedProblem problem(coarse_setup(gamma, mode));
      Trajectory u = problem.zero_control();
      for (std::size_t n = 0; n < u.n_levels(); ++n)
        for (int i = 1; i < u.mesh().n_space; ++i)
          u[n][i] = 0.1 * std::sin(2.0 * i + 0.3 * static_cast<double>(n));
      const GradCheckReport report = gradient_check(problem, u, 3, 99);
      CHECK(report.passed);
      CHECK(report.max_rel_error <= 1e-4);
    }
}

TEST_CASE("adjoint gradient stays exact with kink splitting enabled") {
  ProblemSetup setup = coarse_setup(0.02, NormMode::l2);
  setup.fem.split_kinks = true;
  const ReducedProblem problem(setup);
  Trajectory u = problem.zero_control();
  for (std::size_t n = 0; n < u.n_levels(); ++n)
    for (int i = 1; i < u.mesh().n_space; ++i)
      u[n][i] = 0.1 * std::sin(2.0 * i + 0.1 * static_cast<double>(n));
  const GradCheckReport report = gradient_check(problem, u, 3, 5);
  CHECK(report.passed);
}

TEST_CASE("gamma = 0 omits the penalty term entirely") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 4);
  const TimeGrid tg = build_time_grid(1.0, 2);
  Trajectory y(mesh, tg); // identically zero: violates c0 = 1 everywhere
  ObjectiveParams obj;
  obj.gamma = 0.0;
  obj.c0 = 1.0;
  const ObjectiveValue val =
      eval_objective(y, Trajectory(mesh, tg), y, obj, tg);
  CHECK(val.penalty == 0.0);
  CHECK(val.total == 0.0);
}

TEST_CASE("gradient check is quiet at a stationary point") {
  // Target = the uncontrolled evolution itself: u = 0 is stationary, both
  // the assembled gradient and the finite-difference quotients sit at the
  // noise floor.
  ProblemSetup setup = coarse_setup(0.0, NormMode::l2);
  const ForwardResult natural =
      solve_forward(setup.y0, Trajectory(setup.y0.mesh, setup.time_grid),
                    setup.model, setup.time_grid, setup.newton);
  setup.ytilde = natural.y;
  const ReducedProblem problem(setup);
  const GradCheckReport report =
      gradient_check(problem, problem.zero_control(), 3, 7);
  CHECK(report.passed);
  for (const auto& dir : report.directions)
    CHECK(std::abs(dir.adjoint_value) <= 1e-9);
}

TEST_CASE("penalty violation measures the constrained deficit") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 4);
  const TimeGrid tg = build_time_grid(1.0, 2);
  Trajectory y(mesh, tg); // identically zero, c0 = 1 -> violation 1 per level
  const double v = penalty_violation(y, 1.0);
  // k * 3 levels * |1|^2 = 1.5, sqrt = sqrt(1.5)
  CHECK(v == doctest::Approx(std::sqrt(1.5)).epsilon(1e-13));

  Trajectory ok(mesh, tg);
  for (auto& level : ok.levels)
    for (auto& val : level.values) val = 2.0;
  CHECK(penalty_violation(ok, 1.0) == 0.0);
}

TEST_CASE("mismatched grids are rejected") {
  const Mesh1D mesh = build_mesh(0.0, 1.0, 4);
  const TimeGrid tg = build_time_grid(1.0, 4);
  const TimeGrid other = build_time_grid(1.0, 5);
  CHECK_THROWS_AS(eval_objective(Trajectory(mesh, tg), Trajectory(mesh, other),
                                 Trajectory(mesh, tg), ObjectiveParams{}, tg),
                  GridMismatchError);
}
