#pragma once

#include "thinfilm/mesh.hpp"
#include "thinfilm/state.hpp"

#include <functional>
#include <string>

namespace thinfilm {

enum class ProfileKind {
  constant,
  sine,
  cosine_bump,
  gaussian_bump,
  piecewise_linear_file
};

/// Closed-form profile family, f(x) = offset + amplitude * shape(x) with
///   constant:     shape = 0 (the level is `offset`)
///   sine:         shape = sin(pi (x - a) / (b - a))
///   cosine_bump:  shape = |cos(pi (x - center) / width)|
///   gaussian_bump: shape = exp(-((x - center) / width)^2)
/// piecewise_linear_file reads whitespace-separated (x, value) rows with
/// strictly increasing x covering the domain.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::constant;
  double amplitude = 1.0;
  double offset = 0.0;
  double center = 0.0;
  double width = 1.0;
  std::string path;     ///< data file for piecewise_linear_file
  bool project = false; ///< L2-project instead of nodal interpolation
};

/// Pointwise evaluator of the profile on the given domain. File-backed
/// profiles are loaded here; throws ProfileError on missing/malformed data.
std::function<double(double)> profile_function(const ProfileSpec& spec,
                                               const Mesh1D& mesh);

/// Nodal interpolant (or L2 projection, per spec.project) of the profile.
NodalField realize_field(const ProfileSpec& spec, const Mesh1D& mesh,
                         const FemOptions& opts = {});

/// Time-constant target trajectory.
Trajectory realize_target(const ProfileSpec& spec, const Mesh1D& mesh,
                          const TimeGrid& tg, const FemOptions& opts = {});

/// Time-constant control trajectory with the boundary values forced to zero
/// at every level.
Trajectory realize_control(const ProfileSpec& spec, const Mesh1D& mesh,
                           const TimeGrid& tg, const FemOptions& opts = {});

const char* to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

} // namespace thinfilm
