#pragma once

#include "thinfilm/mesh.hpp"
#include "thinfilm/objective.hpp"
#include "thinfilm/optimizer.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/state.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace thinfilm {

/// Fully resolved run configuration, one JSON document with sections
/// domain, time, model, objective, newton, armijo, fem, initial_condition,
/// target, control, output. Only domain and time are mandatory; everything
/// else has the documented defaults.
struct RunConfig {
  // domain / time
  double a = 0.0;
  double b = 5.0;
  int n_space = 30;
  double t_final = 1.0;
  int n_time = 5000;

  ModelParams model;
  ObjectiveParams objective;
  NewtonParams newton;
  ArmijoParams armijo;
  FemOptions fem;

  ProfileSpec initial_condition{ProfileKind::gaussian_bump, 1.0, 0.2, 2.5,
                                0.7071067811865476, "", false};
  std::optional<ProfileSpec> target;
  std::optional<ProfileSpec> control;

  std::vector<double> snapshot_times;

  Mesh1D mesh() const { return build_mesh(a, b, n_space); }
  TimeGrid time_grid() const { return build_time_grid(t_final, n_time); }
};

/// Parses a config document; throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads and parses a config file.
RunConfig load_config_file(const std::string& path);

/// Serializes the fully resolved configuration (manifest form).
nlohmann::json to_json(const RunConfig& config);

nlohmann::json to_json(const ProfileSpec& spec);
ProfileSpec profile_from_json(const nlohmann::json& doc,
                              const std::string& section);

const char* to_string(NormMode mode);

} // namespace thinfilm
