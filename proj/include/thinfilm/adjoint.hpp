#pragma once

#include "thinfilm/banded.hpp"
#include "thinfilm/mesh.hpp"
#include "thinfilm/objective.hpp"
#include "thinfilm/state.hpp"

namespace thinfilm {

/// System matrix of one backward level: the exact transpose of the state
/// Newton Jacobian at the converged (y_next, p_next). Unknowns interleave as
/// (z_i, s_i) per node.
BandedMatrix adjoint_system_matrix(const NodalField& y_next,
                                   const NodalField& p_next,
                                   const ModelParams& model, double k,
                                   const QuadratureRule& quad,
                                   bool split_sign = false);

struct AdjointLevel {
  NodalField z;
  NodalField s;
};

/// Solves the coupled linear level system
///   (1/k)(phi, z) + (dmobility(y) p_x phi, z_x) + (phi_x, s_x)
///     = (1/k)(phi, z_next) + source(phi),
///   (mobility(y) phi_x, z_x) - (phi, s) = 0,
/// where the source is the per-level derivative of the objective: tracking
/// residual plus, for gamma > 0, the penalty term (1/gamma)(phi, (c0-y)^+).
/// In euclidean norm mode both sources are plain coefficient vectors.
AdjointLevel adjoint_step(const NodalField& z_next, const NodalField& y_next,
                          const NodalField& p_next,
                          const NodalField& ytilde_next,
                          const ModelParams& model, const ObjectiveParams& obj,
                          double k, const FemOptions& opts = {});

struct AdjointResult {
  Trajectory z;
  Trajectory s;
};

/// Backward sweep: z^{n_time} = 0, then (z^n, s^n) level by level down to 0.
/// Singular solves are rethrown with the failing level.
AdjointResult solve_backward(const Trajectory& y, const Trajectory& p,
                             const Trajectory& ytilde,
                             const ModelParams& model,
                             const ObjectiveParams& obj, const TimeGrid& tg,
                             const FemOptions& opts = {});

} // namespace thinfilm
