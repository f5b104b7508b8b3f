// Test-only reference implementations kept independent of the banded solver
// path: dense linear algebra, dense weak-form assembly and a Jacobi
// eigensolver for small symmetric matrices.
#pragma once

#include "thinfilm/banded.hpp"
#include "thinfilm/mesh.hpp"
#include "thinfilm/quadrature.hpp"
#include "thinfilm/state.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t rows, std::size_t cols) {
  return Dense(rows, std::vector<double>(cols, 0.0));
}

inline Dense from_banded(const thinfilm::BandedMatrix& A) {
  Dense D = zeros(A.n, A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) D[i][j] = A.at(i, j);
  return D;
}

inline Dense transpose(const Dense& A) {
  Dense T = zeros(A[0].size(), A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
  return T;
}

inline std::vector<double> multiply(const Dense& A,
                                    const std::vector<double>& x) {
  std::vector<double> y(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
  return y;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
    if (A[pivot][col] == 0.0)
      throw std::runtime_error("dense_solve: singular matrix");
    std::swap(A[col], A[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Dense A) {
  const std::size_t n = A.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += A[p][q] * A[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (A[p][q] == 0.0) continue;
        const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = A[i][p], aiq = A[i][q];
          A[i][p] = c * aip - s * aiq;
          A[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = A[p][i], aqi = A[q][i];
          A[p][i] = c * api - s * aqi;
          A[q][i] = s * api + c * aqi;
        }
      }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = A[i][i];
  return eig;
}

// ---------------------------------------------------------------------------
// Dense weak-form assembly, written directly from the definitions.
// ---------------------------------------------------------------------------

// (w(x) phi_i' , phi_j') with w given pointwise through y and a map.
template <class W>
Dense dense_weighted_stiffness(const thinfilm::Mesh1D& mesh,
                               const thinfilm::QuadratureRule& quad,
                               const thinfilm::NodalField& y, W&& w) {
  Dense K = zeros(mesh.n_nodes(), mesh.n_nodes());
  for (int e = 0; e < mesh.n_space; ++e) {
    const double grad[2] = {-1.0 / mesh.h, 1.0 / mesh.h};
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double yq = y[e] * (1.0 - xi) + y[e + 1] * xi;
      const double scale = quad.weights[q] * mesh.h * w(yq);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          K[e + a][e + b] += scale * grad[a] * grad[b];
    }
  }
  return K;
}

inline Dense dense_mass(const thinfilm::Mesh1D& mesh,
                        const thinfilm::QuadratureRule& quad) {
  Dense M = zeros(mesh.n_nodes(), mesh.n_nodes());
  for (int e = 0; e < mesh.n_space; ++e)
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double basis[2] = {1.0 - xi, xi};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          M[e + a][e + b] +=
              quad.weights[q] * mesh.h * basis[a] * basis[b];
    }
  return M;
}

inline Dense dense_stiffness(const thinfilm::Mesh1D& mesh) {
  Dense A = zeros(mesh.n_nodes(), mesh.n_nodes());
  for (int e = 0; e < mesh.n_space; ++e) {
    const double inv_h = 1.0 / mesh.h;
    A[e][e] += inv_h;
    A[e][e + 1] -= inv_h;
    A[e + 1][e] -= inv_h;
    A[e + 1][e + 1] += inv_h;
  }
  return A;
}

// (dw(y) p_x phi_j, phi_i') -- the Newton coupling block.
template <class DW>
Dense dense_coupling(const thinfilm::Mesh1D& mesh,
                     const thinfilm::QuadratureRule& quad,
                     const thinfilm::NodalField& y,
                     const thinfilm::NodalField& p, DW&& dw) {
  Dense G = zeros(mesh.n_nodes(), mesh.n_nodes());
  for (int e = 0; e < mesh.n_space; ++e) {
    const double grad[2] = {-1.0 / mesh.h, 1.0 / mesh.h};
    const double p_x = (p[e + 1] - p[e]) / mesh.h;
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double basis[2] = {1.0 - xi, xi};
      const double yq = y[e] * (1.0 - xi) + y[e + 1] * xi;
      const double scale = quad.weights[q] * mesh.h * dw(yq) * p_x;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          G[e + a][e + b] += scale * grad[a] * basis[b];
    }
  }
  return G;
}

// (u_x, phi_i) assembled by quadrature.
inline std::vector<double> dense_control_forcing(
    const thinfilm::Mesh1D& mesh, const thinfilm::QuadratureRule& quad,
    const thinfilm::NodalField& u) {
  std::vector<double> b(static_cast<std::size_t>(mesh.n_nodes()), 0.0);
  for (int e = 0; e < mesh.n_space; ++e) {
    const double u_x = (u[e + 1] - u[e]) / mesh.h;
    for (int q = 0; q < quad.size(); ++q) {
      const double xi = quad.points[q];
      const double scale = quad.weights[q] * mesh.h * u_x;
      b[e] += scale * (1.0 - xi);
      b[e + 1] += scale * xi;
    }
  }
  return b;
}

// Full dense Newton matrix of one implicit step at state (y, p), unknowns
// interleaved (y_i, p_i) to match the solver layout.
inline Dense dense_step_jacobian(const thinfilm::Mesh1D& mesh,
                                 const thinfilm::QuadratureRule& quad,
                                 const thinfilm::NodalField& y,
                                 const thinfilm::NodalField& p,
                                 const thinfilm::ModelParams& model,
                                 double k) {
  const int nn = mesh.n_nodes();
  const Dense M = dense_mass(mesh, quad);
  const Dense A = dense_stiffness(mesh);
  const Dense K = dense_weighted_stiffness(
      mesh, quad, y, [&](double v) { return thinfilm::mobility(model, v); });
  const Dense G = dense_coupling(mesh, quad, y, p, [&](double v) {
    return thinfilm::mobility_derivative(model, v);
  });
  Dense J = zeros(2 * nn, 2 * nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      J[2 * i][2 * j] = M[i][j] / k + G[i][j];
      J[2 * i][2 * j + 1] = K[i][j];
      J[2 * i + 1][2 * j] = A[i][j];
      J[2 * i + 1][2 * j + 1] = -M[i][j];
    }
  return J;
}

// One implicit step solved densely to tight tolerance.
inline std::pair<thinfilm::NodalField, thinfilm::NodalField>
dense_forward_step(const thinfilm::NodalField& y_prev,
                   const thinfilm::NodalField& u_next,
                   const thinfilm::ModelParams& model, double k,
                   const thinfilm::QuadratureRule& quad) {
  const thinfilm::Mesh1D& mesh = y_prev.mesh;
  const int nn = mesh.n_nodes();
  const Dense M = dense_mass(mesh, quad);
  const Dense A = dense_stiffness(mesh);
  const std::vector<double> b = dense_control_forcing(mesh, quad, u_next);

  thinfilm::NodalField y = y_prev;
  thinfilm::NodalField p(mesh);

  for (int it = 0; it < 100; ++it) {
    const Dense K = dense_weighted_stiffness(
        mesh, quad, y, [&](double v) { return thinfilm::mobility(model, v); });
    std::vector<double> dy(y.values);
    for (int i = 0; i < nn; ++i) dy[i] -= y_prev[i];
    const std::vector<double> m_dy = multiply(M, dy);
    const std::vector<double> kp = multiply(K, p.values);
    const std::vector<double> ay = multiply(A, y.values);
    const std::vector<double> mp = multiply(M, p.values);

    std::vector<double> r(static_cast<std::size_t>(2 * nn));
    double rnorm = 0.0;
    for (int i = 0; i < nn; ++i) {
      r[2 * i] = -(m_dy[i] / k + kp[i] - b[i]);
      r[2 * i + 1] = -(ay[i] - mp[i]);
      rnorm += r[2 * i] * r[2 * i] + r[2 * i + 1] * r[2 * i + 1];
    }
    if (std::sqrt(rnorm) < 1e-14) break;

    const std::vector<double> d =
        dense_solve(dense_step_jacobian(mesh, quad, y, p, model, k), r);
    for (int i = 0; i < nn; ++i) {
      y[i] += d[2 * i];
      p[i] += d[2 * i + 1];
    }
  }
  return {y, p};
}

inline double rel_diff(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / std::max(den, 1e-300);
}

} // namespace oracle
