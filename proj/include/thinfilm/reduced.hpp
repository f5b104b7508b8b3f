#pragma once

#include "thinfilm/adjoint.hpp"
#include "thinfilm/mesh.hpp"
#include "thinfilm/objective.hpp"
#include "thinfilm/state.hpp"

namespace thinfilm {

/// Everything that pins down one optimal-control problem instance.
struct ProblemSetup {
  NodalField y0;
  Trajectory ytilde;
  ModelParams model;
  ObjectiveParams objective;
  NewtonParams newton;
  TimeGrid time_grid;
  FemOptions fem;
};

/// The reduced objective J(u) = J(y(u), u): forward solve, objective
/// evaluation, and the adjoint-based gradient, bundled for the optimizer and
/// the finite-difference check.
class ReducedProblem {
public:
  explicit ReducedProblem(ProblemSetup setup);

  const ProblemSetup& setup() const { return setup_; }

  Trajectory zero_control() const;

  ForwardResult forward(const Trajectory& u) const;

  ObjectiveValue objective_of(const ForwardResult& state,
                              const Trajectory& u) const;

  /// Forward solve + objective total; the finite-difference probe.
  double value(const Trajectory& u) const;

  /// Exact discrete gradient via the backward (adjoint) sweep.
  Trajectory gradient(const Trajectory& u, const ForwardResult& state) const;

private:
  ProblemSetup setup_;
};

} // namespace thinfilm
