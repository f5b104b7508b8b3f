#include "thinfilm/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace thinfilm {

BandedMatrix mass_matrix(const Mesh1D& mesh) {
  BandedMatrix M(mesh.n_nodes(), 1, 1);
  const double h = mesh.h;
  for (int e = 0; e < mesh.n_space; ++e) {
    M.add(e, e, h / 3.0);
    M.add(e, e + 1, h / 6.0);
    M.add(e + 1, e, h / 6.0);
    M.add(e + 1, e + 1, h / 3.0);
  }
  return M;
}

BandedMatrix stiffness_matrix(const Mesh1D& mesh) {
  BandedMatrix A(mesh.n_nodes(), 1, 1);
  const double inv_h = 1.0 / mesh.h;
  for (int e = 0; e < mesh.n_space; ++e) {
    A.add(e, e, inv_h);
    A.add(e, e + 1, -inv_h);
    A.add(e + 1, e, -inv_h);
    A.add(e + 1, e + 1, inv_h);
  }
  return A;
}

std::vector<double> control_forcing(const NodalField& u) {
  const int ne = u.mesh.n_space;
  std::vector<double> b(u.size(), 0.0);
  for (int e = 0; e < ne; ++e) {
    const double half_jump = 0.5 * (u[e + 1] - u[e]);
    b[e] += half_jump;
    b[e + 1] += half_jump;
  }
  return b;
}

std::vector<double> derivative_pairing(const NodalField& z) {
  const int ne = z.mesh.n_space;
  std::vector<double> d(z.size(), 0.0);
  for (int e = 0; e < ne; ++e) {
    const double mean = 0.5 * (z[e] + z[e + 1]);
    d[e] -= mean;
    d[e + 1] += mean;
  }
  return d;
}

double integral(const NodalField& y) {
  double s = 0.0;
  for (double v : y.values) s += v;
  s -= 0.5 * (y.values.front() + y.values.back());
  return s * y.mesh.h;
}

double energy(const NodalField& y) {
  double s = 0.0;
  for (int e = 0; e < y.mesh.n_space; ++e) {
    const double dy = y[e + 1] - y[e];
    s += dy * dy;
  }
  return 0.5 * s / y.mesh.h;
}

namespace {

// Integrates w(xi) * f((c0-y)(xi)) * {phi_left, phi_right} over a
// sub-interval [s0, s1] of the reference element and accumulates into
// (acc_l, acc_r). gl, gr are the endpoint values of c0 - y.
template <class F>
void accumulate_sub(const QuadratureRule& quad, double h, double gl, double gr,
                    double s0, double s1, F&& f, double& acc_l,
                    double& acc_r) {
  const double len = s1 - s0;
  if (len <= 0.0) return;
  for (int q = 0; q < quad.size(); ++q) {
    const double xi = s0 + len * quad.points[q];
    const double g = gl * (1.0 - xi) + gr * xi;
    const double v = quad.weights[q] * len * h * f(g);
    acc_l += v * (1.0 - xi);
    acc_r += v * xi;
  }
}

// Shared element walk for the penalty terms. f maps the linear function
// value g = c0 - y to the integrand factor ((g)^+ or ((g)^+)^2).
template <class F>
void penalty_walk(const Mesh1D& mesh, const QuadratureRule& quad,
                  const NodalField& y, double c0, bool split_kinks, F&& f,
                  std::vector<double>* source, double* total) {
  for (int e = 0; e < mesh.n_space; ++e) {
    const double gl = c0 - y[e];
    const double gr = c0 - y[e + 1];
    if (gl <= 0.0 && gr <= 0.0) continue;

    double acc_l = 0.0, acc_r = 0.0;
    const bool kinked = (gl > 0.0) != (gr > 0.0);
    if (split_kinks && kinked) {
      const double xi0 = gl / (gl - gr); // interior zero of g
      if (gl > 0.0)
        accumulate_sub(quad, mesh.h, gl, gr, 0.0, xi0, f, acc_l, acc_r);
      else
        accumulate_sub(quad, mesh.h, gl, gr, xi0, 1.0, f, acc_l, acc_r);
    } else {
      accumulate_sub(quad, mesh.h, gl, gr, 0.0, 1.0, f, acc_l, acc_r);
    }
    if (source) {
      (*source)[e] += acc_l;
      (*source)[e + 1] += acc_r;
    }
    if (total) *total += acc_l + acc_r;
  }
}

} // namespace

std::vector<double> penalty_source(const Mesh1D& mesh,
                                   const QuadratureRule& quad,
                                   const NodalField& y, double c0,
                                   bool split_kinks) {
  std::vector<double> src(static_cast<std::size_t>(mesh.n_nodes()), 0.0);
  penalty_walk(mesh, quad, y, c0, split_kinks,
               [](double g) { return std::max(g, 0.0); }, &src, nullptr);
  return src;
}

double penalty_integral(const Mesh1D& mesh, const QuadratureRule& quad,
                        const NodalField& y, double c0, bool split_kinks) {
  double total = 0.0;
  penalty_walk(
      mesh, quad, y, c0, split_kinks,
      [](double g) {
        const double gp = std::max(g, 0.0);
        return gp * gp;
      },
      nullptr, &total);
  return total;
}

} // namespace thinfilm
