#pragma once

#include "thinfilm/mesh.hpp"
#include "thinfilm/state.hpp"

namespace thinfilm {

/// Norm convention for the discrete objective and gradient test. `l2` uses
/// mesh-weighted L2 norms of the P1 functions (the derivative term through
/// the piecewise-constant u_x); `euclidean` uses plain coefficient-vector
/// norms.
enum class NormMode { l2, euclidean };

struct ObjectiveParams {
  double alpha = 1e-7;  ///< control weight
  double gamma = 0.0;   ///< penalty parameter; 0 disables the penalty term
  double c0 = 0.0;      ///< state-constraint level
  NormMode norm_mode = NormMode::l2;
};

/// Throws InvalidDomainError unless alpha > 0 and gamma >= 0.
void validate(const ObjectiveParams& obj);

struct ObjectiveValue {
  double total = 0.0;
  double tracking = 0.0;
  double control = 0.0;
  double penalty = 0.0;
};

/// Discrete penalized objective
///   (k/2) sum_n |y^n - ytilde^n|^2 + (alpha k/2) sum_n |u^n_x|^2
///   + (k/(2 gamma)) sum_n |(c0 - y^n)^+|^2,
/// all sums over levels 0..n_time, norms per ObjectiveParams::norm_mode; the
/// penalty term is omitted for gamma = 0.
ObjectiveValue eval_objective(const Trajectory& y, const Trajectory& u,
                              const Trajectory& ytilde,
                              const ObjectiveParams& obj, const TimeGrid& tg,
                              const FemOptions& opts = {});

/// Exact gradient of the reduced objective with respect to the control
/// coefficients. Level n+1 combines the control regularization with the
/// pairing k * (z^n, phi_x) from the scheme's forcing term; level 0 carries
/// only the regularization since u(t_0) never enters the state equation.
/// Boundary entries are forced to zero.
Trajectory assemble_gradient(const Trajectory& u, const Trajectory& z,
                             const ObjectiveParams& obj, const TimeGrid& tg);

/// Squared gradient norm for the descent test: time levels accumulate with
/// weight k and the mesh-weighted L2 norm in l2 mode, as a plain coefficient
/// sum in euclidean mode.
double grad_norm_sq(const Trajectory& g, NormMode mode);

/// Function-space representative of the coefficient gradient: per level the
/// nodal values d solving (d, phi) = g[phi] / k over the interior (Dirichlet)
/// nodes, zero at the boundary. This is the discrete form of the optimality
/// residual alpha*u + z_x that the descent iteration steps along; pairing d
/// against the k-weighted mass inner product reproduces g exactly.
Trajectory gradient_representative(const Trajectory& g);

/// Mesh-weighted L2(Omega) norm squared of a P1 function, v' M v.
double l2_norm_sq(const NodalField& v);

/// Constraint violation of a state trajectory,
/// (k sum_n |(c0 - y^n)^+|^2_{L2})^(1/2). A diagnostic, so the elementwise
/// integrals always split at the kink of (c0 - y)^+; shallow dips would
/// otherwise fall between quadrature points.
double penalty_violation(const Trajectory& y, double c0,
                         const FemOptions& opts = {});

} // namespace thinfilm
