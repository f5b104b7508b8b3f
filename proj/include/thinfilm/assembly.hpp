#pragma once

#include "thinfilm/banded.hpp"
#include "thinfilm/mesh.hpp"
#include "thinfilm/quadrature.hpp"

#include <utility>
#include <vector>

namespace thinfilm {

/// Consistent P1 mass matrix, M_ij = (phi_i, phi_j). Tridiagonal SPD.
BandedMatrix mass_matrix(const Mesh1D& mesh);

/// P1 stiffness matrix, A_ij = (phi_i', phi_j'). Tridiagonal, positive
/// semidefinite with kernel spanned by the constant vector.
BandedMatrix stiffness_matrix(const Mesh1D& mesh);

/// Weighted stiffness K_ij = (w(x) phi_i', phi_j'), with the coefficient
/// integrated elementwise by `quad`. The basis derivatives are constant per
/// element, so only the element average of w enters.
template <class W>
BandedMatrix weighted_stiffness(const Mesh1D& mesh, const QuadratureRule& quad,
                                W&& w) {
  BandedMatrix K(mesh.n_nodes(), 1, 1);
  const double inv_h = 1.0 / mesh.h;
  for (int e = 0; e < mesh.n_space; ++e) {
    const double xl = mesh.node(e);
    double w_int = 0.0; // integral of w over the element
    for (int q = 0; q < quad.size(); ++q)
      w_int += quad.weights[q] * w(xl + quad.points[q] * mesh.h);
    w_int *= mesh.h;
    const double c = w_int * inv_h * inv_h;
    K.add(e, e, c);
    K.add(e, e + 1, -c);
    K.add(e + 1, e, -c);
    K.add(e + 1, e + 1, c);
  }
  return K;
}

namespace detail {

// Integrates w(y(xi)) * {phi_left, phi_right} over the reference element.
// With `split_sign` set and y changing sign inside the element, the two
// sub-intervals around the zero are integrated separately, which makes
// piecewise-polynomial weights like |y|^beta exact again. The weight
// vanishes only at the split point itself, so downstream derivatives pick
// up no boundary terms from the moving split.
template <class W>
void element_weight_moments(const QuadratureRule& quad, double yl, double yr,
                            bool split_sign, W&& w, double& m_left,
                            double& m_right) {
  m_left = 0.0;
  m_right = 0.0;
  const bool kinked = split_sign && ((yl < 0.0) != (yr < 0.0)) && yl != yr;
  const double xi0 = kinked ? yl / (yl - yr) : 1.0;
  const int pieces = kinked ? 2 : 1;
  for (int piece = 0; piece < pieces; ++piece) {
    const double s0 = (piece == 0) ? 0.0 : xi0;
    const double s1 = (piece == 0 && kinked) ? xi0 : 1.0;
    const double len = s1 - s0;
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = s0 + len * quad.points[q];
      const double v = quad.weights[q] * len * w(yl * (1.0 - xi) + yr * xi);
      m_left += v * (1.0 - xi);
      m_right += v * xi;
    }
  }
}

} // namespace detail

/// Weighted stiffness with the coefficient w(y(x)) evaluated through the
/// nodal field y at the quadrature points. `split_sign` subdivides elements
/// at the interior zero of y.
template <class W>
BandedMatrix field_weighted_stiffness(const Mesh1D& mesh,
                                      const QuadratureRule& quad,
                                      const NodalField& y, W&& w,
                                      bool split_sign = false) {
  BandedMatrix K(mesh.n_nodes(), 1, 1);
  const double inv_h = 1.0 / mesh.h;
  for (int e = 0; e < mesh.n_space; ++e) {
    double m_left, m_right;
    detail::element_weight_moments(quad, y[e], y[e + 1], split_sign, w,
                                   m_left, m_right);
    const double c = (m_left + m_right) * mesh.h * inv_h * inv_h;
    K.add(e, e, c);
    K.add(e, e + 1, -c);
    K.add(e + 1, e, -c);
    K.add(e + 1, e + 1, c);
  }
  return K;
}

/// Coupling block G_ij = (dw(y) p_x phi_j, phi_i') for the Newton
/// linearization of a y-dependent mobility: dw is applied to the interpolated
/// y value, p_x is the (elementwise constant) derivative of p.
template <class DW>
BandedMatrix mobility_coupling(const Mesh1D& mesh, const QuadratureRule& quad,
                               const NodalField& y, const NodalField& p,
                               DW&& dw, bool split_sign = false) {
  BandedMatrix G(mesh.n_nodes(), 1, 1);
  const double inv_h = 1.0 / mesh.h;
  for (int e = 0; e < mesh.n_space; ++e) {
    const double p_x = (p[e + 1] - p[e]) * inv_h;
    double s_left, s_right; // integrals of dw(y) phi_loc over the element
    detail::element_weight_moments(quad, y[e], y[e + 1], split_sign, dw,
                                   s_left, s_right);
    s_left *= mesh.h;
    s_right *= mesh.h;
    // phi_i' is -1/h for the left node, +1/h for the right node.
    G.add(e, e, -p_x * s_left * inv_h);
    G.add(e, e + 1, -p_x * s_right * inv_h);
    G.add(e + 1, e, p_x * s_left * inv_h);
    G.add(e + 1, e + 1, p_x * s_right * inv_h);
  }
  return G;
}

/// Load vector entries (f, phi_i) by elementwise quadrature.
template <class F>
std::vector<double> load_vector(const Mesh1D& mesh, const QuadratureRule& quad,
                                F&& f) {
  std::vector<double> load(static_cast<std::size_t>(mesh.n_nodes()), 0.0);
  for (int e = 0; e < mesh.n_space; ++e) {
    const double xl = mesh.node(e);
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double v = quad.weights[q] * mesh.h * f(xl + xi * mesh.h);
      load[e] += v * (1.0 - xi);
      load[e + 1] += v * xi;
    }
  }
  return load;
}

/// L2 projection onto the P1 space: solves M c = (f, phi_i).
template <class F>
NodalField l2_project(const Mesh1D& mesh, const QuadratureRule& quad, F&& f) {
  const std::vector<double> load = load_vector(mesh, quad, std::forward<F>(f));
  NodalField result(mesh);
  result.values = solve_banded(mass_matrix(mesh), load);
  return result;
}

/// Forcing entries (u_x, phi_i); exact since the integrand is linear per
/// element.
std::vector<double> control_forcing(const NodalField& u);

/// Pairing entries (z, phi_i'); exact for the same reason.
std::vector<double> derivative_pairing(const NodalField& z);

/// Integral of the P1 function over the domain (trapezoid, exact).
double integral(const NodalField& y);

/// Dirichlet energy (1/2) * (y_x, y_x).
double energy(const NodalField& y);

/// Load entries ((c0 - y)^+, phi_i). With `split_kinks` the element is split
/// at the interior zero of c0 - y and each part integrated exactly.
std::vector<double> penalty_source(const Mesh1D& mesh,
                                   const QuadratureRule& quad,
                                   const NodalField& y, double c0,
                                   bool split_kinks = false);

/// Integral of ((c0 - y)^+)^2 over the domain, same quadrature treatment.
double penalty_integral(const Mesh1D& mesh, const QuadratureRule& quad,
                        const NodalField& y, double c0,
                        bool split_kinks = false);

} // namespace thinfilm
