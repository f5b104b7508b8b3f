#pragma once

#include "thinfilm/config.hpp"
#include "thinfilm/gradcheck.hpp"
#include "thinfilm/optimizer.hpp"
#include "thinfilm/state.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace thinfilm {

/// What a run left on disk: the output directory and the manifest that was
/// written there (resolved config, snapshot mapping, outcome).
struct RunArtifacts {
  std::filesystem::path dir;
  nlohmann::json manifest;
};

/// Forward-only experiment driver: solves the scheme for the configured
/// control, writes snapshot_*.dat at the requested times, diagnostics.csv
/// and manifest.json into out_dir.
RunArtifacts run_forward(const RunConfig& config,
                         const std::filesystem::path& out_dir);

/// Optimization driver: steepest descent from u = 0, then the forward
/// artifacts for the optimal state plus convergence.csv, the optimal control
/// (control.csv and per-snapshot control_*.dat) and target.dat.
/// `log` (optional) receives one progress line per outer iteration.
RunArtifacts run_optimize(const RunConfig& config,
                          const std::filesystem::path& out_dir,
                          std::ostream* log = nullptr);

/// Builds the reduced problem of a config and runs the finite-difference
/// gradient check with the configured control as base point.
GradCheckReport run_gradcheck(const RunConfig& config, int n_directions,
                              unsigned seed);

void print_report(const GradCheckReport& report, std::ostream& os);

/// Coarse problem used by `gradcheck` when no config is given
/// (n_space = 10, n_time = 20, active penalty region).
RunConfig default_gradcheck_config();

enum class RunKind { forward, optimize };

struct ExperimentMember {
  std::string label;
  RunKind kind = RunKind::forward;
  RunConfig config;
};

/// Preset experiment families E1, E2, E2c, E3. Throws ConfigError for an
/// unknown name.
std::vector<ExperimentMember> experiment_preset(const std::string& name);

} // namespace thinfilm
