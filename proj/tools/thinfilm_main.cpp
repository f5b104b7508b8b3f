// Command-line front end: forward/optimize runs, experiment presets and the
// finite-difference gradient check.
//
// Exit codes: 0 success, 2 invalid configuration, 3 solver failure,
// 4 optimizer budget exhausted, 5 gradient check failed.

#include "thinfilm/errors.hpp"
#include "thinfilm/runner.hpp"
#include "thinfilm/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

constexpr int kExitConfigInvalid = 2;
constexpr int kExitSolverFailed = 3;
constexpr int kExitBudgetExhausted = 4;
constexpr int kExitGradCheckFailed = 5;

int finish_optimize(const thinfilm::RunArtifacts& artifacts) {
  const std::string reason = artifacts.manifest["outcome"]["stop_reason"];
  std::cout << "optimize: stop reason " << reason << ", artifacts in "
            << artifacts.dir.string() << "\n";
  if (reason == "gradient_tolerance") return 0;
  if (reason == "line_search_failed") return kExitSolverFailed;
  return kExitBudgetExhausted;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control solver for the 1D thin-film equation"};
  app.set_version_flag("--version", thinfilm::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", experiment_name;
  int directions = 5;
  unsigned seed = 2024;
  int max_outer_override = -1;
  bool quiet = false;

  CLI::App* forward = app.add_subcommand("forward", "run the forward solver");
  forward->add_option("--config", config_path, "JSON config file")
      ->required();
  forward->add_option("--out", out_dir, "output directory");

  CLI::App* optimize =
      app.add_subcommand("optimize", "run the steepest-descent optimizer");
  optimize->add_option("--config", config_path, "JSON config file")
      ->required();
  optimize->add_option("--out", out_dir, "output directory");
  optimize->add_flag("--quiet", quiet, "suppress per-iteration progress");

  CLI::App* experiment =
      app.add_subcommand("experiment", "run a preset family (E1, E2, E2c, E3)");
  experiment->add_option("name", experiment_name, "preset name")->required();
  experiment->add_option("--out", out_dir, "output directory");
  experiment->add_option("--max-outer", max_outer_override,
                         "override the optimizer outer-iteration budget");
  experiment->add_flag("--quiet", quiet, "suppress per-iteration progress");

  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "finite-difference check of the adjoint gradient");
  gradcheck->add_option("--config", config_path,
                        "JSON config file (default: built-in coarse problem)");
  gradcheck->add_option("--directions", directions, "number of directions");
  gradcheck->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (forward->parsed()) {
      const thinfilm::RunConfig cfg = thinfilm::load_config_file(config_path);
      const thinfilm::RunArtifacts artifacts =
          thinfilm::run_forward(cfg, out_dir);
      std::cout << "forward: artifacts in " << artifacts.dir.string() << "\n";
      return 0;
    }

    if (optimize->parsed()) {
      const thinfilm::RunConfig cfg = thinfilm::load_config_file(config_path);
      const thinfilm::RunArtifacts artifacts =
          thinfilm::run_optimize(cfg, out_dir, quiet ? nullptr : &std::cout);
      return finish_optimize(artifacts);
    }

    if (experiment->parsed()) {
      int worst = 0;
      for (thinfilm::ExperimentMember member :
           thinfilm::experiment_preset(experiment_name)) {
        if (max_outer_override >= 0)
          member.config.armijo.max_outer = max_outer_override;
        const std::filesystem::path dir =
            std::filesystem::path(out_dir) / member.label;
        std::cout << "== " << experiment_name << "/" << member.label << "\n";
        if (member.kind == thinfilm::RunKind::forward) {
          thinfilm::run_forward(member.config, dir);
        } else {
          const thinfilm::RunArtifacts artifacts = thinfilm::run_optimize(
              member.config, dir, quiet ? nullptr : &std::cout);
          worst = std::max(worst, finish_optimize(artifacts));
        }
      }
      return worst;
    }

    if (gradcheck->parsed()) {
      const thinfilm::RunConfig cfg =
          config_path.empty() ? thinfilm::default_gradcheck_config()
                              : thinfilm::load_config_file(config_path);
      const thinfilm::GradCheckReport report =
          thinfilm::run_gradcheck(cfg, directions, seed);
      thinfilm::print_report(report, std::cout);
      return report.passed ? 0 : kExitGradCheckFailed;
    }
  } catch (const thinfilm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigInvalid;
  } catch (const thinfilm::ProfileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigInvalid;
  } catch (const thinfilm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailed;
  }
  return 0;
}
