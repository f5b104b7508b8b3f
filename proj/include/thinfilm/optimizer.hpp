#pragma once

#include "thinfilm/objective.hpp"
#include "thinfilm/reduced.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace thinfilm {

/// Armijo backtracking parameters: rho is the contraction factor of the
/// trial step, sigma_star the sufficient-decrease coefficient, delta_tol
/// the squared-gradient-norm stopping threshold of the outer loop.
struct ArmijoParams {
  double sigma_star = 1e-5;
  double rho = 0.15;
  double delta_tol = 5e-5;
  int max_outer = 50000;
  int max_backtracks = 60;
};

/// Throws InvalidDomainError unless 0 < rho < 1, sigma_star > 0,
/// delta_tol > 0 and the budgets are positive.
void validate(const ArmijoParams& params);

/// State and objective of one evaluated trial control.
struct TrialState {
  ForwardResult state;
  ObjectiveValue j;
};

/// Evaluates a trial control; nullopt marks a trial whose forward solve
/// failed (treated as a rejected step, backtracking continues).
using TrialEvaluator =
    std::function<std::optional<TrialState>(const Trajectory&)>;

struct ArmijoOutcome {
  Trajectory u;
  TrialState accepted;
  int s_exponent = 0; ///< first s with u - rho^s * g accepted
};

/// Backtracking search along -g: returns the first s = 0, 1, ... whose trial
/// u - rho^s * g satisfies
///   J(trial) - j_current <= -sigma_star * rho^s * grad_sq.
/// Throws LineSearchError after max_backtracks rejected trials.
ArmijoOutcome armijo_search(const Trajectory& u, const Trajectory& g,
                            double j_current, double grad_sq,
                            const ArmijoParams& params,
                            const TrialEvaluator& eval);

enum class StopReason { gradient_tolerance, max_outer_reached,
                        line_search_failed };

const char* to_string(StopReason reason);

/// One row of the convergence history: the objective and gradient norm at
/// iterate r, and the backtracks spent to leave it.
struct OuterRecord {
  int iter = 0;
  ObjectiveValue j;
  double grad_norm_sq = 0.0;
  int backtracks = 0;
  double wall_seconds = 0.0;
};

using ProgressSink = std::function<void(const OuterRecord&)>;

struct OptimizeOutcome {
  Trajectory u;
  ForwardResult state;
  ObjectiveValue j;
  std::vector<OuterRecord> history;
  StopReason stop = StopReason::gradient_tolerance;
  double final_grad_norm_sq = 0.0;
};

/// Steepest descent with the Armijo rule, started from u = 0. Stops when
/// grad_norm_sq <= delta_tol, the outer budget is exhausted, or a line
/// search fails; all three end states are reported with the final iterate
/// rather than thrown.
OptimizeOutcome steepest_descent(const ReducedProblem& problem,
                                 const ArmijoParams& params,
                                 const ProgressSink& sink = {});

} // namespace thinfilm
