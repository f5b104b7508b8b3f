#include "thinfilm/runner.hpp"

#include "thinfilm/errors.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/reduced.hpp"
#include "thinfilm/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace thinfilm {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file " + path.string());
  out << std::setprecision(17);
  return out;
}

void write_two_column(const fs::path& path, const NodalField& field) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < field.mesh.n_nodes(); ++i)
    out << field.mesh.node(i) << " " << field[i] << "\n";
}

struct SnapshotPlan {
  double requested = 0.0;
  double grid_time = 0.0;
  int step = 0;
  std::string file;
};

std::vector<SnapshotPlan> plan_snapshots(const RunConfig& cfg,
                                         const std::string& stem) {
  std::vector<SnapshotPlan> plan;
  const TimeGrid tg = cfg.time_grid();
  for (std::size_t s = 0; s < cfg.snapshot_times.size(); ++s) {
    SnapshotPlan snap;
    snap.requested = cfg.snapshot_times[s];
    snap.step = static_cast<int>(std::lround(snap.requested / tg.k));
    snap.step = std::clamp(snap.step, 0, tg.n_time);
    snap.grid_time = tg.time(snap.step);
    snap.file = stem + "_" + std::to_string(s) + ".dat";
    plan.push_back(snap);
  }
  return plan;
}

json snapshot_json(const std::vector<SnapshotPlan>& plan) {
  json list = json::array();
  for (const SnapshotPlan& snap : plan)
    list.push_back({{"requested_t", snap.requested},
                    {"grid_t", snap.grid_time},
                    {"step", snap.step},
                    {"file", snap.file}});
  return list;
}

void write_snapshots(const fs::path& dir, const Trajectory& traj,
                     const std::vector<SnapshotPlan>& plan) {
  for (const SnapshotPlan& snap : plan)
    write_two_column(dir / snap.file, traj[snap.step]);
}

void write_diagnostics(const fs::path& path,
                       const std::vector<LevelDiagnostics>& diag) {
  std::ofstream out = open_out(path);
  out << "t,mass,energy,entropy,min_y,newton_iterations\n";
  for (const LevelDiagnostics& d : diag) {
    out << d.time << "," << d.mass << "," << d.energy << ",";
    if (d.entropy)
      out << *d.entropy;
    else
      out << "nan";
    out << "," << d.min_value << "," << d.newton_iterations << "\n";
  }
}

void write_convergence(const fs::path& path,
                       const std::vector<OuterRecord>& history) {
  std::ofstream out = open_out(path);
  out << "iter,j_total,j_tracking,j_control,j_penalty,grad_norm_sq,"
         "backtracks,wall_seconds\n";
  for (const OuterRecord& rec : history)
    out << rec.iter << "," << rec.j.total << "," << rec.j.tracking << ","
        << rec.j.control << "," << rec.j.penalty << "," << rec.grad_norm_sq
        << "," << rec.backtracks << "," << rec.wall_seconds << "\n";
}

void write_control_trajectory(const fs::path& path, const Trajectory& u) {
  std::ofstream out = open_out(path);
  out << "t,x,u\n";
  for (std::size_t n = 0; n < u.n_levels(); ++n) {
    const double t = u.grid.time(static_cast<int>(n));
    for (int i = 0; i < u.mesh().n_nodes(); ++i)
      out << t << "," << u.mesh().node(i) << "," << u[n][i] << "\n";
  }
}

json manifest_header(const RunConfig& cfg, const char* kind) {
  return json{{"tool", "thinfilm"},
              {"version", kVersion},
              {"kind", kind},
              {"config", to_json(cfg)}};
}

void write_manifest(const fs::path& dir, const json& manifest) {
  std::ofstream out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

struct ForwardSummary {
  double mass_drift = 0.0;
  double min_y = 0.0;
  int newton_max = 0;
  double newton_median = 0.0;
};

ForwardSummary summarize(const ForwardResult& fr) {
  ForwardSummary s;
  s.min_y = fr.diagnostics.front().min_value;
  const double mass0 = fr.diagnostics.front().mass;
  std::vector<int> iters;
  for (const LevelDiagnostics& d : fr.diagnostics) {
    s.mass_drift = std::max(s.mass_drift, std::abs(d.mass - mass0));
    s.min_y = std::min(s.min_y, d.min_value);
    if (&d != &fr.diagnostics.front()) iters.push_back(d.newton_iterations);
  }
  if (!iters.empty()) {
    s.newton_max = *std::max_element(iters.begin(), iters.end());
    std::nth_element(iters.begin(), iters.begin() + iters.size() / 2,
                     iters.end());
    s.newton_median = iters[iters.size() / 2];
    if (iters.size() % 2 == 0) {
      std::nth_element(iters.begin(), iters.begin() + iters.size() / 2 - 1,
                       iters.end());
      s.newton_median =
          0.5 * (s.newton_median + iters[iters.size() / 2 - 1]);
    }
  }
  return s;
}

json summary_json(const ForwardSummary& s) {
  return json{{"mass_drift", s.mass_drift},
              {"min_y", s.min_y},
              {"newton_iterations_max", s.newton_max},
              {"newton_iterations_median", s.newton_median}};
}

ProblemSetup make_setup(const RunConfig& cfg) {
  if (!cfg.target)
    throw ConfigError("config: section 'target' is required for optimization");
  const Mesh1D mesh = cfg.mesh();
  const TimeGrid tg = cfg.time_grid();
  ProblemSetup setup;
  setup.y0 = realize_field(cfg.initial_condition, mesh, cfg.fem);
  setup.ytilde = realize_target(*cfg.target, mesh, tg, cfg.fem);
  setup.model = cfg.model;
  setup.objective = cfg.objective;
  setup.newton = cfg.newton;
  setup.time_grid = tg;
  setup.fem = cfg.fem;
  return setup;
}

} // namespace

RunArtifacts run_forward(const RunConfig& config, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const Mesh1D mesh = config.mesh();
  const TimeGrid tg = config.time_grid();

  const NodalField y0 = realize_field(config.initial_condition, mesh,
                                      config.fem);
  const Trajectory u =
      config.control
          ? realize_control(*config.control, mesh, tg, config.fem)
          : Trajectory(mesh, tg);

  const ForwardResult fr =
      solve_forward(y0, u, config.model, tg, config.newton, config.fem);

  fs::create_directories(out_dir);
  const std::vector<SnapshotPlan> plan = plan_snapshots(config, "snapshot");
  write_snapshots(out_dir, fr.y, plan);
  write_diagnostics(out_dir / "diagnostics.csv", fr.diagnostics);

  json manifest = manifest_header(config, "forward");
  manifest["snapshots"] = snapshot_json(plan);
  manifest["outcome"] = summary_json(summarize(fr));
  manifest["outcome"]["status"] = "ok";
  manifest["outcome"]["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(out_dir, manifest);
  return RunArtifacts{out_dir, std::move(manifest)};
}

RunArtifacts run_optimize(const RunConfig& config, const fs::path& out_dir,
                          std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ReducedProblem problem(make_setup(config));

  ProgressSink sink;
  if (log) {
    *log << std::setprecision(10);
    sink = [log](const OuterRecord& rec) {
      *log << "iter " << rec.iter << "  J " << rec.j.total << "  |g|^2 "
           << rec.grad_norm_sq << "  backtracks " << rec.backtracks << "\n";
    };
  }

  const OptimizeOutcome opt = steepest_descent(problem, config.armijo, sink);

  fs::create_directories(out_dir);
  const std::vector<SnapshotPlan> plan = plan_snapshots(config, "snapshot");
  write_snapshots(out_dir, opt.state.y, plan);
  write_diagnostics(out_dir / "diagnostics.csv", opt.state.diagnostics);
  write_convergence(out_dir / "convergence.csv", opt.history);
  write_control_trajectory(out_dir / "control.csv", opt.u);
  write_two_column(out_dir / "target.dat",
                   problem.setup().ytilde.levels.front());
  const std::vector<SnapshotPlan> control_plan =
      plan_snapshots(config, "control");
  write_snapshots(out_dir, opt.u, control_plan);

  json manifest = manifest_header(config, "optimize");
  manifest["snapshots"] = snapshot_json(plan);
  manifest["control_snapshots"] = snapshot_json(control_plan);
  manifest["outcome"] = summary_json(summarize(opt.state));
  manifest["outcome"]["status"] = "ok";
  manifest["outcome"]["stop_reason"] = to_string(opt.stop);
  manifest["outcome"]["outer_iterations"] = opt.history.back().iter;
  manifest["outcome"]["final_grad_norm_sq"] = opt.final_grad_norm_sq;
  manifest["outcome"]["final_objective"] = {{"total", opt.j.total},
                                            {"tracking", opt.j.tracking},
                                            {"control", opt.j.control},
                                            {"penalty", opt.j.penalty}};
  manifest["outcome"]["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  write_manifest(out_dir, manifest);
  return RunArtifacts{out_dir, std::move(manifest)};
}

GradCheckReport run_gradcheck(const RunConfig& config, int n_directions,
                              unsigned seed) {
  const Mesh1D mesh = config.mesh();
  const TimeGrid tg = config.time_grid();
  const Trajectory u_base =
      config.control
          ? realize_control(*config.control, mesh, tg, config.fem)
          : Trajectory(mesh, tg);
  const ReducedProblem problem(make_setup(config));
  return gradient_check(problem, u_base, n_directions, seed);
}

void print_report(const GradCheckReport& report, std::ostream& os) {
  os << std::setprecision(6) << std::scientific;
  for (const GradCheckDirection& dir : report.directions) {
    os << "direction " << dir.index << ": adjoint " << dir.adjoint_value
       << "  fd " << dir.fd_value << "  rel_error " << dir.rel_error
       << "  (step " << dir.best_step << ")\n";
    for (const auto& [step, err] : dir.sweep)
      os << "    step " << step << "  rel_error " << err << "\n";
  }
  os << "max relative error " << report.max_rel_error << " (tolerance "
     << report.tolerance << "): " << (report.passed ? "PASS" : "FAIL")
     << "\n";
}

RunConfig default_gradcheck_config() {
  RunConfig cfg;
  cfg.a = 0.0;
  cfg.b = 5.0;
  cfg.n_space = 10;
  cfg.t_final = 1.0;
  cfg.n_time = 20;
  cfg.model.eps = 0.1;
  cfg.model.c0 = 0.5; // keeps the penalty active along the flat flanks
  cfg.objective.c0 = 0.5;
  cfg.objective.gamma = 0.02;
  cfg.target = ProfileSpec{ProfileKind::gaussian_bump, 1.0, 0.2, 1.5,
                           0.7071067811865476, "", false};
  cfg.control = ProfileSpec{ProfileKind::sine, 0.1, 0.0, 0.0, 1.0, "", false};
  return cfg;
}

namespace {

RunConfig e1_base() {
  RunConfig cfg;
  cfg.a = 0.0;
  cfg.b = 5.0;
  cfg.n_space = 48;
  cfg.t_final = 1.0;
  cfg.n_time = 30000;
  cfg.model.eps = 0.03;
  cfg.snapshot_times = {0.0, 0.25, 0.9};
  return cfg;
}

RunConfig e2_base() {
  RunConfig cfg;
  cfg.a = 0.0;
  cfg.b = 5.0;
  cfg.n_space = 30;
  cfg.t_final = 1.0;
  cfg.n_time = 5000;
  cfg.objective.alpha = 1e-7;
  cfg.snapshot_times = {0.0, 0.1, 0.2, 0.5, 0.75, 1.0};
  return cfg;
}

RunConfig e3_base() {
  RunConfig cfg;
  cfg.a = 0.0;
  cfg.b = 5.0;
  cfg.n_space = 42;
  cfg.t_final = 1.0;
  cfg.n_time = 5000;
  cfg.model.eps = 0.1;
  cfg.model.c0 = 0.0;
  cfg.objective.alpha = 1e-7;
  cfg.objective.c0 = 0.0;
  // The stopping threshold delta_tol is calibrated against the plain
  // coefficient norm the optimization experiments state.
  cfg.objective.norm_mode = NormMode::euclidean;
  // Flat film holding less mass than the dewetting target. Mass conservation
  // then forces the unconstrained optimum below zero at the target valleys,
  // which is what the penalty has to push back against.
  cfg.initial_condition = ProfileSpec{ProfileKind::constant, 0.0, 0.4, 0.0,
                                      1.0, "", false};
  cfg.target = ProfileSpec{ProfileKind::cosine_bump, 0.8, 0.0, 0.0, 2.5, "",
                           false};
  cfg.snapshot_times = {0.0, 0.03, 0.05, 0.1, 0.2, 1.0};
  return cfg;
}

} // namespace

std::vector<ExperimentMember> experiment_preset(const std::string& name) {
  std::vector<ExperimentMember> members;
  if (name == "E1") {
    RunConfig controlled = e1_base();
    controlled.control =
        ProfileSpec{ProfileKind::sine, 0.35, 0.0, 0.0, 1.0, "", false};
    members.push_back({"controlled", RunKind::forward, controlled});
    members.push_back({"uncontrolled", RunKind::forward, e1_base()});
    RunConfig eps0 = e1_base();
    eps0.model.eps = 0.0;
    members.push_back({"uncontrolled_eps0", RunKind::forward, eps0});
  } else if (name == "E2") {
    for (double eps : {0.5, 0.05}) {
      RunConfig cfg = e2_base();
      cfg.model.eps = eps;
      members.push_back({eps == 0.5 ? "eps0.5" : "eps0.05", RunKind::forward,
                         cfg});
    }
  } else if (name == "E2c") {
    for (double eps : {0.5, 0.05}) {
      RunConfig cfg = e2_base();
      cfg.model.eps = eps;
      cfg.objective.gamma = 0.0;
      cfg.objective.norm_mode = NormMode::euclidean;
      cfg.target = ProfileSpec{ProfileKind::gaussian_bump, 1.0, 0.2, 1.5,
                               0.7071067811865476, "", false};
      members.push_back({eps == 0.5 ? "eps0.5" : "eps0.05", RunKind::optimize,
                         cfg});
    }
  } else if (name == "E3") {
    for (double gamma : {0.02, 0.0}) {
      RunConfig cfg = e3_base();
      cfg.objective.gamma = gamma;
      members.push_back({gamma > 0.0 ? "gamma0.02" : "gamma0",
                         RunKind::optimize, cfg});
    }
  } else {
    throw ConfigError("unknown experiment preset '" + name +
                      "' (expected E1, E2, E2c or E3)");
  }
  return members;
}

} // namespace thinfilm
