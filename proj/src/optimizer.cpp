#include "thinfilm/optimizer.hpp"

#include "thinfilm/errors.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

namespace thinfilm {

void validate(const ArmijoParams& params) {
  if (!(params.rho > 0.0 && params.rho < 1.0))
    throw InvalidDomainError("ArmijoParams: rho must lie in (0, 1)");
  if (!(params.sigma_star > 0.0))
    throw InvalidDomainError("ArmijoParams: sigma_star must be > 0");
  if (!(params.delta_tol > 0.0))
    throw InvalidDomainError("ArmijoParams: delta_tol must be > 0");
  if (params.max_outer < 0 || params.max_backtracks < 1)
    throw InvalidDomainError("ArmijoParams: invalid iteration budgets");
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::gradient_tolerance: return "gradient_tolerance";
    case StopReason::max_outer_reached: return "max_outer_reached";
    case StopReason::line_search_failed: return "line_search_failed";
  }
  return "unknown";
}

ArmijoOutcome armijo_search(const Trajectory& u, const Trajectory& g,
                            double j_current, double grad_sq,
                            const ArmijoParams& params,
                            const TrialEvaluator& eval) {
  validate(params);
  double step = 1.0;
  for (int s = 0; s < params.max_backtracks; ++s, step *= params.rho) {
    Trajectory trial = u;
    add_scaled(trial, -step, g);
    std::optional<TrialState> result = eval(trial);
    if (!result) continue; // forward solve broke down; shrink and retry
    if (result->j.total - j_current <= -params.sigma_star * step * grad_sq) {
      ArmijoOutcome out;
      out.u = std::move(trial);
      out.accepted = std::move(*result);
      out.s_exponent = s;
      return out;
    }
  }
  throw LineSearchError("Armijo search rejected " +
                        std::to_string(params.max_backtracks) + " trials");
}

OptimizeOutcome steepest_descent(const ReducedProblem& problem,
                                 const ArmijoParams& params,
                                 const ProgressSink& sink) {
  validate(params);
  const NormMode mode = problem.setup().objective.norm_mode;
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };

  const TrialEvaluator eval =
      [&](const Trajectory& u_trial) -> std::optional<TrialState> {
    try {
      TrialState ts;
      ts.state = problem.forward(u_trial);
      ts.j = problem.objective_of(ts.state, u_trial);
      return ts;
    } catch (const NewtonDivergedError&) {
      return std::nullopt;
    } catch (const SingularMatrixError&) {
      return std::nullopt;
    }
  };

  OptimizeOutcome out;
  out.u = problem.zero_control();
  out.state = problem.forward(out.u);
  out.j = problem.objective_of(out.state, out.u);

  for (int r = 0;; ++r) {
    // Step along the function-space representative of the gradient (the
    // discrete optimality residual alpha*u + z_x); the raw coefficient
    // gradient would scale steps by k*h and stall the iteration.
    const Trajectory g =
        gradient_representative(problem.gradient(out.u, out.state));
    const double gn2 = grad_norm_sq(g, mode);

    OuterRecord rec;
    rec.iter = r;
    rec.j = out.j;
    rec.grad_norm_sq = gn2;
    rec.wall_seconds = elapsed();

    if (gn2 <= params.delta_tol || r >= params.max_outer) {
      out.history.push_back(rec);
      if (sink) sink(rec);
      out.stop = gn2 <= params.delta_tol ? StopReason::gradient_tolerance
                                         : StopReason::max_outer_reached;
      out.final_grad_norm_sq = gn2;
      return out;
    }

    ArmijoOutcome ao;
    try {
      ao = armijo_search(out.u, g, out.j.total, gn2, params, eval);
    } catch (const LineSearchError&) {
      rec.backtracks = params.max_backtracks;
      out.history.push_back(rec);
      if (sink) sink(rec);
      out.stop = StopReason::line_search_failed;
      out.final_grad_norm_sq = gn2;
      return out;
    }

    rec.backtracks = ao.s_exponent;
    rec.wall_seconds = elapsed();
    out.history.push_back(rec);
    if (sink) sink(rec);

    out.u = std::move(ao.u);
    out.state = std::move(ao.accepted.state);
    out.j = ao.accepted.j;
  }
}

} // namespace thinfilm
