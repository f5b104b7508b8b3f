#include "thinfilm/profiles.hpp"

#include "thinfilm/assembly.hpp"
#include "thinfilm/errors.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

namespace thinfilm {

namespace {

struct TabulatedProfile {
  std::vector<double> x;
  std::vector<double> v;

  double eval(double xq) const {
    // x is strictly increasing and covers the query range.
    std::size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (x[mid] <= xq ? lo : hi) = mid;
    }
    const double t = (xq - x[lo]) / (x[hi] - x[lo]);
    return v[lo] + t * (v[hi] - v[lo]);
  }
};

TabulatedProfile load_table(const std::string& path, const Mesh1D& mesh) {
  std::ifstream in(path);
  if (!in)
    throw ProfileError("profile file not found: " + path);

  TabulatedProfile table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    double x, v;
    if (!(row >> x >> v))
      throw ProfileError("malformed profile file " + path + " at line " +
                         std::to_string(lineno));
    if (!table.x.empty() && !(x > table.x.back()))
      throw ProfileError("profile file " + path +
                         ": x must be strictly increasing (line " +
                         std::to_string(lineno) + ")");
    table.x.push_back(x);
    table.v.push_back(v);
  }
  if (table.x.size() < 2)
    throw ProfileError("profile file " + path + ": need at least two rows");
  const double slack = 1e-9 * mesh.h;
  if (table.x.front() > mesh.a + slack || table.x.back() < mesh.b - slack)
    throw ProfileError("profile file " + path + ": data covers [" +
                       std::to_string(table.x.front()) + ", " +
                       std::to_string(table.x.back()) +
                       "] but the domain is [" + std::to_string(mesh.a) +
                       ", " + std::to_string(mesh.b) + "]");
  return table;
}

} // namespace

std::function<double(double)> profile_function(const ProfileSpec& spec,
                                               const Mesh1D& mesh) {
  const double amp = spec.amplitude;
  const double off = spec.offset;
  switch (spec.kind) {
    case ProfileKind::constant:
      return [off](double) { return off; };
    case ProfileKind::sine: {
      const double a = mesh.a, length = mesh.b - mesh.a;
      return [=](double x) {
        return off + amp * std::sin(std::numbers::pi * (x - a) / length);
      };
    }
    case ProfileKind::cosine_bump: {
      const double c = spec.center, w = spec.width;
      return [=](double x) {
        return off + amp * std::abs(std::cos(std::numbers::pi * (x - c) / w));
      };
    }
    case ProfileKind::gaussian_bump: {
      const double c = spec.center, w = spec.width;
      return [=](double x) {
        const double t = (x - c) / w;
        return off + amp * std::exp(-t * t);
      };
    }
    case ProfileKind::piecewise_linear_file: {
      auto table = std::make_shared<TabulatedProfile>(load_table(spec.path,
                                                                 mesh));
      return [table](double x) { return table->eval(x); };
    }
  }
  throw ProfileError("unknown profile kind");
}

NodalField realize_field(const ProfileSpec& spec, const Mesh1D& mesh,
                         const FemOptions& opts) {
  const auto f = profile_function(spec, mesh);
  if (spec.project)
    return l2_project(mesh, QuadratureRule::gauss(opts.quad_points), f);
  NodalField field(mesh);
  for (int i = 0; i < mesh.n_nodes(); ++i) field[i] = f(mesh.node(i));
  return field;
}

Trajectory realize_target(const ProfileSpec& spec, const Mesh1D& mesh,
                          const TimeGrid& tg, const FemOptions& opts) {
  const NodalField field = realize_field(spec, mesh, opts);
  Trajectory traj(mesh, tg);
  for (NodalField& level : traj.levels) level = field;
  return traj;
}

Trajectory realize_control(const ProfileSpec& spec, const Mesh1D& mesh,
                           const TimeGrid& tg, const FemOptions& opts) {
  NodalField field = realize_field(spec, mesh, opts);
  field.zero_boundary();
  Trajectory traj(mesh, tg);
  for (NodalField& level : traj.levels) level = field;
  return traj;
}

const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::sine: return "sine";
    case ProfileKind::cosine_bump: return "cosine_bump";
    case ProfileKind::gaussian_bump: return "gaussian_bump";
    case ProfileKind::piecewise_linear_file: return "piecewise_linear_file";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "constant") return ProfileKind::constant;
  if (name == "sine") return ProfileKind::sine;
  if (name == "cosine_bump") return ProfileKind::cosine_bump;
  if (name == "gaussian_bump") return ProfileKind::gaussian_bump;
  if (name == "piecewise_linear_file")
    return ProfileKind::piecewise_linear_file;
  throw ConfigError("unknown profile kind '" + name + "'");
}

} // namespace thinfilm
