#pragma once

#include <cstddef>
#include <vector>

namespace thinfilm {

/// Uniform grid of linear elements on [a, b].
struct Mesh1D {
  double a = 0.0;
  double b = 1.0;
  int n_space = 2;     ///< number of elements
  double h = 0.5;      ///< element length, (b - a) / n_space

  int n_nodes() const { return n_space + 1; }
  double node(int i) const { return a + i * h; }

  bool operator==(const Mesh1D&) const = default;
};

/// Builds a uniform mesh; throws InvalidDomainError unless b > a and
/// n_space >= 2.
Mesh1D build_mesh(double a, double b, int n_space);

/// Uniform partition of [0, T] into n_time steps of length k.
struct TimeGrid {
  double t_final = 1.0;
  int n_time = 1;
  double k = 1.0;      ///< step size, t_final / n_time

  int n_levels() const { return n_time + 1; }
  double time(int n) const { return n * k; }

  bool operator==(const TimeGrid&) const = default;
};

/// Builds a time grid; throws InvalidDomainError unless t_final > 0 and
/// n_time >= 1.
TimeGrid build_time_grid(double t_final, int n_time);

/// Coefficient vector of a continuous piecewise-linear function on a mesh.
struct NodalField {
  Mesh1D mesh;
  std::vector<double> values;

  NodalField() = default;
  NodalField(const Mesh1D& m, double fill = 0.0)
      : mesh(m), values(static_cast<std::size_t>(m.n_nodes()), fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  /// Piecewise-linear evaluation at x (clamped to [a, b]).
  double eval(double x) const;

  double min_value() const;
  double max_abs() const;

  /// Forces the two boundary coefficients to zero (discrete H^1_0).
  void zero_boundary() {
    values.front() = 0.0;
    values.back() = 0.0;
  }
};

/// Time-indexed sequence of nodal fields sharing one mesh, levels 0..n_time.
struct Trajectory {
  TimeGrid grid;
  std::vector<NodalField> levels;

  Trajectory() = default;
  Trajectory(const Mesh1D& mesh, const TimeGrid& tg)
      : grid(tg), levels(static_cast<std::size_t>(tg.n_levels()),
                         NodalField(mesh)) {}

  std::size_t n_levels() const { return levels.size(); }
  NodalField& operator[](std::size_t n) { return levels[n]; }
  const NodalField& operator[](std::size_t n) const { return levels[n]; }

  const Mesh1D& mesh() const { return levels.front().mesh; }
};

/// Throws GridMismatchError unless both fields share one mesh.
void require_same_mesh(const NodalField& f, const NodalField& g,
                       const char* what);

/// Throws GridMismatchError unless both trajectories share mesh and grid.
void require_same_layout(const Trajectory& f, const Trajectory& g,
                         const char* what);

/// y = y + c * x, entrywise over all levels.
void add_scaled(Trajectory& y, double c, const Trajectory& x);

} // namespace thinfilm
