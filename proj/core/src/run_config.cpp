#include "cavityflow/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cavityflow {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.find(key) == allowed.end())
      throw ConfigError("unknown key: " + (section.empty() ? key : section + "." + key));
  }
}

template <typename T>
T get_or(const json& obj, const std::string& section, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for " + section + "." + key);
  }
}

ConvectionForm parse_form(const std::string& s, const std::string& key) {
  if (s == "conservative") return ConvectionForm::Conservative;
  if (s == "characteristic") return ConvectionForm::Characteristic;
  if (s == "skew_symmetric") return ConvectionForm::SkewSymmetric;
  throw ConfigError(key + ": unknown convection form '" + s + "'");
}

Linearization parse_method(const std::string& s, const std::string& key) {
  if (s == "method1") return Linearization::Method1;
  if (s == "method2") return Linearization::Method2;
  if (s == "method3") return Linearization::Method3;
  if (s == "newton") return Linearization::Newton;
  throw ConfigError(key + ": unknown linearization '" + s + "'");
}

GeometryConfig parse_geometry(const json& obj) {
  reject_unknown_keys(obj, "geometry", {"type", "m", "path"});
  GeometryConfig g;
  const std::string type = get_or<std::string>(obj, "geometry", "type", "square");
  if (type == "square") {
    g.kind = GeometryConfig::Kind::Square;
  } else if (type == "semi_ellipse") {
    g.kind = GeometryConfig::Kind::SemiEllipse;
  } else if (type == "msh") {
    g.kind = GeometryConfig::Kind::Msh;
  } else {
    throw ConfigError("geometry.type: unknown geometry '" + type + "'");
  }
  g.m = get_or<int>(obj, "geometry", "m", 32);
  g.path = get_or<std::string>(obj, "geometry", "path", "");
  if (g.kind == GeometryConfig::Kind::Msh && g.path.empty())
    throw ConfigError("geometry.path: required for msh geometry");
  if (g.kind != GeometryConfig::Kind::Msh && g.m < 1)
    throw ConfigError("geometry.m: must be a positive integer");
  if (g.kind == GeometryConfig::Kind::SemiEllipse && g.m < 2)
    throw ConfigError("geometry.m: semi_ellipse requires m >= 2");
  return g;
}

SolverConfig parse_solver(const json& obj) {
  reject_unknown_keys(obj, "solver",
                      {"reynolds", "form", "method", "sigma", "tol", "max_iter",
                       "divergence_threshold"});
  SolverConfig s;
  s.reynolds = get_or<double>(obj, "solver", "reynolds", s.reynolds);
  s.form = parse_form(get_or<std::string>(obj, "solver", "form", "conservative"), "solver.form");
  s.method = parse_method(get_or<std::string>(obj, "solver", "method", "newton"), "solver.method");
  s.sigma = get_or<double>(obj, "solver", "sigma", s.sigma);
  s.tol = get_or<double>(obj, "solver", "tol", s.tol);
  s.max_iter = get_or<int>(obj, "solver", "max_iter", s.max_iter);
  s.divergence_threshold =
      get_or<double>(obj, "solver", "divergence_threshold", s.divergence_threshold);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("solver.") + e.what());
  }
  return s;
}

ContinuationSection parse_continuation(const json& obj, const SolverConfig& solver) {
  reject_unknown_keys(obj, "continuation",
                      {"re_start", "delta_start", "re_target", "step_iterations", "budget",
                       "delta_min", "mode", "schedule"});
  ContinuationSection section;
  auto& c = section.cfg;
  c.per_step = solver;
  c.re_start = get_or<double>(obj, "continuation", "re_start", c.re_start);
  c.delta_start = get_or<double>(obj, "continuation", "delta_start", c.delta_start);
  c.re_target = get_or<double>(obj, "continuation", "re_target", c.re_target);
  c.step_iteration_cap = get_or<int>(obj, "continuation", "step_iterations", c.step_iteration_cap);
  c.total_iteration_budget = get_or<int>(obj, "continuation", "budget", c.total_iteration_budget);
  c.delta_min = get_or<double>(obj, "continuation", "delta_min", c.delta_min);
  const std::string mode = get_or<std::string>(obj, "continuation", "mode", "fixed");
  if (mode == "fixed") {
    c.step_mode = StepMode::FixedIterations;
  } else if (mode == "tolerance") {
    c.step_mode = StepMode::ToleranceExit;
  } else {
    throw ConfigError("continuation.mode: expected 'fixed' or 'tolerance'");
  }
  section.schedule = get_or<std::vector<double>>(obj, "continuation", "schedule", {});
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("continuation.") + e.what());
  }
  return section;
}

SweepSection parse_sweep(const json& obj) {
  reject_unknown_keys(obj, "sweep", {"sigmas", "jobs"});
  SweepSection s;
  s.sigmas = get_or<std::vector<double>>(obj, "sweep", "sigmas", {});
  s.jobs = get_or<int>(obj, "sweep", "jobs", 1);
  if (s.sigmas.empty()) throw ConfigError("sweep.sigmas: at least one value required");
  for (double sigma : s.sigmas)
    if (!(sigma > 0.0 && sigma <= 1.0)) throw ConfigError("sweep.sigmas: sigma must be in (0, 1]");
  if (s.jobs < 1) throw ConfigError("sweep.jobs: must be >= 1");
  return s;
}

OutputConfig parse_output(const json& obj) {
  reject_unknown_keys(obj, "output",
                      {"dir", "vtk", "csv_history", "csv_profiles", "stream_function",
                       "vorticity", "psi_flip_sign", "profile_samples"});
  OutputConfig o;
  o.dir = get_or<std::string>(obj, "output", "dir", o.dir);
  o.vtk = get_or<bool>(obj, "output", "vtk", o.vtk);
  o.csv_history = get_or<bool>(obj, "output", "csv_history", o.csv_history);
  o.csv_profiles = get_or<bool>(obj, "output", "csv_profiles", o.csv_profiles);
  o.stream_function = get_or<bool>(obj, "output", "stream_function", o.stream_function);
  o.vorticity = get_or<bool>(obj, "output", "vorticity", o.vorticity);
  o.psi_flip_sign = get_or<bool>(obj, "output", "psi_flip_sign", o.psi_flip_sign);
  o.profile_samples = get_or<int>(obj, "output", "profile_samples", o.profile_samples);
  if (o.profile_samples < 2) throw ConfigError("output.profile_samples: must be >= 2");
  return o;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(root, "", {"geometry", "solver", "continuation", "sweep", "output"});

  RunConfig cfg;
  if (root.contains("geometry")) cfg.geometry = parse_geometry(root.at("geometry"));
  if (root.contains("solver")) cfg.solver = parse_solver(root.at("solver"));
  if (root.contains("output")) cfg.output = parse_output(root.at("output"));
  if (root.contains("continuation"))
    cfg.continuation = parse_continuation(root.at("continuation"), cfg.solver);
  if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"));
  return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

const char* to_string(ConvectionForm form) {
  switch (form) {
    case ConvectionForm::Conservative: return "conservative";
    case ConvectionForm::Characteristic: return "characteristic";
    case ConvectionForm::SkewSymmetric: return "skew_symmetric";
  }
  return "unknown";
}

const char* to_string(Linearization method) {
  switch (method) {
    case Linearization::Method1: return "method1";
    case Linearization::Method2: return "method2";
    case Linearization::Method3: return "method3";
    case Linearization::Newton: return "newton";
  }
  return "unknown";
}

Mesh make_geometry(const GeometryConfig& geometry) {
  switch (geometry.kind) {
    case GeometryConfig::Kind::Square: return unit_square_mesh(geometry.m);
    case GeometryConfig::Kind::SemiEllipse: return semi_ellipse_mesh(geometry.m);
    case GeometryConfig::Kind::Msh: return read_msh_file(geometry.path);
  }
  throw std::logic_error("unreachable geometry kind");
}

}  // namespace cavityflow
