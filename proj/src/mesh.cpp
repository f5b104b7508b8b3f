#include "thinfilm/mesh.hpp"

#include "thinfilm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thinfilm {

Mesh1D build_mesh(double a, double b, int n_space) {
  if (!(b > a))
    throw InvalidDomainError("build_mesh: requires b > a, got [" +
                             std::to_string(a) + ", " + std::to_string(b) +
                             "]");
  if (n_space < 2)
    throw InvalidDomainError("build_mesh: requires n_space >= 2, got " +
                             std::to_string(n_space));
  Mesh1D mesh;
  mesh.a = a;
  mesh.b = b;
  mesh.n_space = n_space;
  mesh.h = (b - a) / n_space;
  return mesh;
}

TimeGrid build_time_grid(double t_final, int n_time) {
  if (!(t_final > 0.0))
    throw InvalidDomainError("build_time_grid: requires t_final > 0");
  if (n_time < 1)
    throw InvalidDomainError("build_time_grid: requires n_time >= 1");
  TimeGrid tg;
  tg.t_final = t_final;
  tg.n_time = n_time;
  tg.k = t_final / n_time;
  return tg;
}

double NodalField::eval(double x) const {
  const double s = (x - mesh.a) / mesh.h;
  int e = static_cast<int>(std::floor(s));
  e = std::clamp(e, 0, mesh.n_space - 1);
  const double xi = std::clamp(s - e, 0.0, 1.0);
  return values[e] * (1.0 - xi) + values[e + 1] * xi;
}

double NodalField::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double NodalField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void require_same_mesh(const NodalField& f, const NodalField& g,
                       const char* what) {
  if (!(f.mesh == g.mesh) || f.values.size() != g.values.size())
    throw GridMismatchError(std::string(what) + ": fields on different meshes");
}

void require_same_layout(const Trajectory& f, const Trajectory& g,
                         const char* what) {
  if (!(f.grid == g.grid) || f.n_levels() != g.n_levels())
    throw GridMismatchError(std::string(what) +
                            ": trajectories on different time grids");
  require_same_mesh(f.levels.front(), g.levels.front(), what);
}

void add_scaled(Trajectory& y, double c, const Trajectory& x) {
  require_same_layout(y, x, "add_scaled");
  for (std::size_t n = 0; n < y.n_levels(); ++n)
    for (std::size_t i = 0; i < y[n].size(); ++i)
      y[n][i] += c * x[n][i];
}

} // namespace thinfilm
