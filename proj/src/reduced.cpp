#include "thinfilm/reduced.hpp"

#include "thinfilm/errors.hpp"

#include <utility>

namespace thinfilm {

ReducedProblem::ReducedProblem(ProblemSetup setup) : setup_(std::move(setup)) {
  validate(setup_.model);
  validate(setup_.objective);
  if (!(setup_.ytilde.grid == setup_.time_grid))
    throw GridMismatchError("ReducedProblem: target grid mismatch");
  require_same_mesh(setup_.y0, setup_.ytilde.levels.front(), "ReducedProblem");
}

Trajectory ReducedProblem::zero_control() const {
  return Trajectory(setup_.y0.mesh, setup_.time_grid);
}

ForwardResult ReducedProblem::forward(const Trajectory& u) const {
  return solve_forward(setup_.y0, u, setup_.model, setup_.time_grid,
                       setup_.newton, setup_.fem);
}

ObjectiveValue ReducedProblem::objective_of(const ForwardResult& state,
                                            const Trajectory& u) const {
  return eval_objective(state.y, u, setup_.ytilde, setup_.objective,
                        setup_.time_grid, setup_.fem);
}

double ReducedProblem::value(const Trajectory& u) const {
  return objective_of(forward(u), u).total;
}

Trajectory ReducedProblem::gradient(const Trajectory& u,
                                    const ForwardResult& state) const {
  const AdjointResult adj =
      solve_backward(state.y, state.p, setup_.ytilde, setup_.model,
                     setup_.objective, setup_.time_grid, setup_.fem);
  return assemble_gradient(u, adj.z, setup_.objective, setup_.time_grid);
}

} // namespace thinfilm
