#include "thinfilm/config.hpp"

#include "thinfilm/errors.hpp"

#include <fstream>

namespace thinfilm {

namespace {

using nlohmann::json;

// Typed fetch with key-qualified error messages.
template <class T>
T get_as(const json& obj, const std::string& section, const std::string& key,
         const T& fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required)
      throw ConfigError("config: missing required key '" + section + "." +
                        key + "'");
    return fallback;
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: key '" + section + "." + key +
                      "' has the wrong type");
  }
}

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> known) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("config: unknown key '" + section + "." + item.key() +
                        "'");
  }
}

NormMode norm_mode_from_string(const std::string& name) {
  if (name == "l2") return NormMode::l2;
  if (name == "euclidean") return NormMode::euclidean;
  throw ConfigError("config: objective.norm_mode must be 'l2' or 'euclidean'");
}

} // namespace

const char* to_string(NormMode mode) {
  return mode == NormMode::l2 ? "l2" : "euclidean";
}

ProfileSpec profile_from_json(const nlohmann::json& doc,
                              const std::string& section) {
  if (!doc.is_object())
    throw ConfigError("config: section '" + section + "' must be an object");
  reject_unknown(doc, section,
                 {"kind", "amplitude", "offset", "center", "width", "path",
                  "project", "time_dependence"});
  ProfileSpec spec;
  spec.kind = profile_kind_from_string(
      get_as<std::string>(doc, section, "kind", "", true));
  spec.amplitude = get_as<double>(doc, section, "amplitude", spec.amplitude);
  spec.offset = get_as<double>(doc, section, "offset", spec.offset);
  spec.center = get_as<double>(doc, section, "center", spec.center);
  spec.width = get_as<double>(doc, section, "width", spec.width);
  spec.path = get_as<std::string>(doc, section, "path", spec.path);
  spec.project = get_as<bool>(doc, section, "project", spec.project);
  const std::string dep =
      get_as<std::string>(doc, section, "time_dependence", "static");
  if (dep != "static" && dep != "none")
    throw ConfigError("config: " + section +
                      ".time_dependence must be 'static' or 'none'");
  if (spec.kind == ProfileKind::piecewise_linear_file && spec.path.empty())
    throw ConfigError("config: " + section +
                      ".path is required for piecewise_linear_file");
  if (!(spec.width > 0.0) && (spec.kind == ProfileKind::cosine_bump ||
                              spec.kind == ProfileKind::gaussian_bump))
    throw ConfigError("config: " + section + ".width must be > 0");
  return spec;
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be an object");
  reject_unknown(doc, "<root>",
                 {"domain", "time", "model", "objective", "newton", "armijo",
                  "fem", "initial_condition", "target", "control", "output"});

  RunConfig cfg;

  if (!doc.contains("domain"))
    throw ConfigError("config: missing required section 'domain'");
  const json& domain = doc.at("domain");
  reject_unknown(domain, "domain", {"a", "b", "n_space"});
  cfg.a = get_as<double>(domain, "domain", "a", cfg.a, true);
  cfg.b = get_as<double>(domain, "domain", "b", cfg.b, true);
  cfg.n_space = get_as<int>(domain, "domain", "n_space", cfg.n_space, true);

  if (!doc.contains("time"))
    throw ConfigError("config: missing required section 'time'");
  const json& time = doc.at("time");
  reject_unknown(time, "time", {"t_final", "n_time"});
  cfg.t_final = get_as<double>(time, "time", "t_final", cfg.t_final, true);
  cfg.n_time = get_as<int>(time, "time", "n_time", cfg.n_time, true);

  if (doc.contains("model")) {
    const json& model = doc.at("model");
    reject_unknown(model, "model", {"lambda", "beta", "eps", "c0"});
    cfg.model.lambda = get_as<double>(model, "model", "lambda", 1.0);
    cfg.model.beta = get_as<double>(model, "model", "beta", 3.0);
    cfg.model.eps = get_as<double>(model, "model", "eps", 0.0);
    cfg.model.c0 = get_as<double>(model, "model", "c0", 0.0);
  }
  cfg.objective.c0 = cfg.model.c0;

  if (doc.contains("objective")) {
    const json& obj = doc.at("objective");
    reject_unknown(obj, "objective", {"alpha", "gamma", "c0", "norm_mode"});
    cfg.objective.alpha = get_as<double>(obj, "objective", "alpha", 1e-7);
    cfg.objective.gamma = get_as<double>(obj, "objective", "gamma", 0.0);
    cfg.objective.c0 =
        get_as<double>(obj, "objective", "c0", cfg.objective.c0);
    cfg.objective.norm_mode = norm_mode_from_string(
        get_as<std::string>(obj, "objective", "norm_mode", "l2"));
  }

  if (doc.contains("newton")) {
    const json& newton = doc.at("newton");
    reject_unknown(newton, "newton", {"tol", "max_iter"});
    cfg.newton.tol = get_as<double>(newton, "newton", "tol", 1e-10);
    cfg.newton.max_iter = get_as<int>(newton, "newton", "max_iter", 1000);
  }

  if (doc.contains("armijo")) {
    const json& armijo = doc.at("armijo");
    reject_unknown(armijo, "armijo",
                   {"sigma_star", "rho", "delta_tol", "max_outer",
                    "max_backtracks"});
    cfg.armijo.sigma_star =
        get_as<double>(armijo, "armijo", "sigma_star", 1e-5);
    cfg.armijo.rho = get_as<double>(armijo, "armijo", "rho", 0.15);
    cfg.armijo.delta_tol = get_as<double>(armijo, "armijo", "delta_tol", 5e-5);
    cfg.armijo.max_outer = get_as<int>(armijo, "armijo", "max_outer", 50000);
    cfg.armijo.max_backtracks =
        get_as<int>(armijo, "armijo", "max_backtracks", 60);
  }

  if (doc.contains("fem")) {
    const json& fem = doc.at("fem");
    reject_unknown(fem, "fem", {"quad_points", "split_kinks"});
    cfg.fem.quad_points = get_as<int>(fem, "fem", "quad_points", 5);
    cfg.fem.split_kinks = get_as<bool>(fem, "fem", "split_kinks", false);
    if (cfg.fem.quad_points < 1)
      throw ConfigError("config: fem.quad_points must be >= 1");
  }

  if (doc.contains("initial_condition"))
    cfg.initial_condition =
        profile_from_json(doc.at("initial_condition"), "initial_condition");
  if (doc.contains("target"))
    cfg.target = profile_from_json(doc.at("target"), "target");
  if (doc.contains("control"))
    cfg.control = profile_from_json(doc.at("control"), "control");

  if (doc.contains("output")) {
    const json& output = doc.at("output");
    reject_unknown(output, "output", {"snapshot_times"});
    cfg.snapshot_times = get_as<std::vector<double>>(
        output, "output", "snapshot_times", cfg.snapshot_times);
  }

  // Surface bad numbers as config errors rather than construction failures.
  try {
    (void)cfg.mesh();
    (void)cfg.time_grid();
    validate(cfg.model);
    validate(cfg.objective);
    validate(cfg.armijo);
  } catch (const InvalidDomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (double t : cfg.snapshot_times)
    if (t < 0.0 || t > cfg.t_final)
      throw ConfigError("config: output.snapshot_times entries must lie in "
                        "[0, t_final]");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(doc);
}

nlohmann::json to_json(const ProfileSpec& spec) {
  json doc{{"kind", to_string(spec.kind)},
           {"amplitude", spec.amplitude},
           {"offset", spec.offset},
           {"center", spec.center},
           {"width", spec.width},
           {"project", spec.project},
           {"time_dependence", "static"}};
  if (!spec.path.empty()) doc["path"] = spec.path;
  return doc;
}

nlohmann::json to_json(const RunConfig& cfg) {
  json doc;
  doc["domain"] = {{"a", cfg.a}, {"b", cfg.b}, {"n_space", cfg.n_space}};
  doc["time"] = {{"t_final", cfg.t_final}, {"n_time", cfg.n_time}};
  doc["model"] = {{"lambda", cfg.model.lambda},
                  {"beta", cfg.model.beta},
                  {"eps", cfg.model.eps},
                  {"c0", cfg.model.c0}};
  doc["objective"] = {{"alpha", cfg.objective.alpha},
                      {"gamma", cfg.objective.gamma},
                      {"c0", cfg.objective.c0},
                      {"norm_mode", to_string(cfg.objective.norm_mode)}};
  doc["newton"] = {{"tol", cfg.newton.tol},
                   {"max_iter", cfg.newton.max_iter}};
  doc["armijo"] = {{"sigma_star", cfg.armijo.sigma_star},
                   {"rho", cfg.armijo.rho},
                   {"delta_tol", cfg.armijo.delta_tol},
                   {"max_outer", cfg.armijo.max_outer},
                   {"max_backtracks", cfg.armijo.max_backtracks}};
  doc["fem"] = {{"quad_points", cfg.fem.quad_points},
                {"split_kinks", cfg.fem.split_kinks}};
  doc["initial_condition"] = to_json(cfg.initial_condition);
  if (cfg.target) doc["target"] = to_json(*cfg.target);
  if (cfg.control) doc["control"] = to_json(*cfg.control);
  doc["output"] = {{"snapshot_times", cfg.snapshot_times}};
  return doc;
}

} // namespace thinfilm
