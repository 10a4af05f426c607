#include "cavityflow/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "cavityflow/postprocess.hpp"

namespace cavityflow {

namespace {

namespace fs = std::filesystem;

std::string g_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void apply_env_override(RunConfig& cfg) {
  if (const char* dir = std::getenv("CAVITYFLOW_OUTPUT"); dir && *dir) cfg.output.dir = dir;
}

fs::path prepare_output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output.dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + path.string());
}

ProbeSet probes_for(const GeometryConfig& geometry, const Mesh& mesh) {
  if (geometry.kind == GeometryConfig::Kind::SemiEllipse)
    return ProbeSet::semi_ellipse_mid_depth();
  if (geometry.kind == GeometryConfig::Kind::Square) {
    ProbeSet set;
    set.probes.push_back({"left", {0.25, 0.5}});
    set.probes.push_back({"center", {0.5, 0.5}});
    set.probes.push_back({"right", {0.75, 0.5}});
    return set;
  }
  // ingested mesh: probes along the horizontal mid-line of the bounding box
  Eigen::Vector2d lo = mesh.vertices.front(), hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double ymid = 0.5 * (lo.y() + hi.y());
  ProbeSet set;
  set.probes.push_back({"left", {lo.x() + 0.25 * (hi.x() - lo.x()), ymid}});
  set.probes.push_back({"center", {lo.x() + 0.5 * (hi.x() - lo.x()), ymid}});
  set.probes.push_back({"right", {lo.x() + 0.75 * (hi.x() - lo.x()), ymid}});
  return set;
}

void write_state_artifacts(const RunConfig& cfg, const fs::path& dir,
                           const TaylorHoodSpace& space, const SolutionState& state,
                           const std::string& suffix, std::ostream& log) {
  std::optional<Field> psi;
  if (cfg.output.stream_function)
    psi = stream_function(state.u, cfg.output.psi_flip_sign);
  std::optional<Field> w;
  if (cfg.output.vorticity) w = vorticity(state.u);

  if (cfg.output.vtk) {
    std::vector<std::pair<std::string, const Field*>> fields;
    fields.emplace_back("velocity", &state.u);
    fields.emplace_back("pressure", &state.p);
    if (w) fields.emplace_back("vorticity", &*w);
    export_vtk_file(space.mesh(), fields, dir / ("solution" + suffix + ".vtk"));
    if (psi) {
      std::vector<std::pair<std::string, const Field*>> psifields;
      psifields.emplace_back("psi", &*psi);
      export_vtk_file(space.mesh(), psifields, dir / ("psi" + suffix + ".vtk"));
    }
  }
  if (cfg.output.csv_profiles) {
    if (cfg.geometry.kind == GeometryConfig::Kind::Square) {
      write_text(dir / ("profiles" + suffix + ".csv"),
                 profiles_csv(sample_profiles(state.u, cfg.output.profile_samples)));
    } else {
      log << "note: centerline profiles are defined for the square cavity only; skipped\n";
    }
  }
}

int run_config_guard(const std::string& config_path, std::ostream& log, RunConfig& cfg) {
  try {
    cfg = parse_run_config_file(config_path);
    apply_env_override(cfg);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int cmd_solve(const std::string& config_path, std::ostream& log) {
  RunConfig cfg;
  if (int rc = run_config_guard(config_path, log, cfg)) return rc;
  try {
    const TaylorHoodSpace space(make_geometry(cfg.geometry));
    const BoundaryConditions bc = lid_cavity_bc();
    const fs::path dir = prepare_output_dir(cfg);

    log << "solve: Re=" << g_fmt(cfg.solver.reynolds) << " method=" << to_string(cfg.solver.method)
        << " form=" << to_string(cfg.solver.form) << " sigma=" << g_fmt(cfg.solver.sigma)
        << " dofs=" << (space.n_u() + space.n_p() + 1) << "\n";

    auto [state, history] = solve_stationary(cfg.solver, space, bc);

    if (cfg.output.csv_history) write_text(dir / "history.csv", history_csv(history));
    write_state_artifacts(cfg, dir, space, state, "", log);

    const double eps_final = history.epsilons.empty() ? 0.0 : history.epsilons.back();
    log << "status=" << to_string(history.status) << " iterations=" << history.iterations()
        << " eps_final=" << g_fmt(eps_final) << " div_norm=" << g_fmt(divergence_norm(state.u))
        << "\n";
    return history.status == SolveStatus::Converged ? 0 : 2;
  } catch (const MshParseError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_continue(const std::string& config_path, std::ostream& log) {
  RunConfig cfg;
  if (int rc = run_config_guard(config_path, log, cfg)) return rc;
  if (!cfg.continuation) {
    log << "config error: continuation: section missing\n";
    return 1;
  }
  try {
    const TaylorHoodSpace space(make_geometry(cfg.geometry));
    const BoundaryConditions bc = lid_cavity_bc();
    const fs::path dir = prepare_output_dir(cfg);
    const auto& section = *cfg.continuation;

    ContinuationTrace trace;
    if (!section.schedule.empty()) {
      log << "continuation: schedule with " << section.schedule.size() << " steps\n";
      trace = continue_sequential(section.cfg, space, bc, section.schedule);
    } else {
      log << "continuation: bisection from Re=" << g_fmt(section.cfg.re_start)
          << " delta=" << g_fmt(section.cfg.delta_start) << "\n";
      trace = continue_bisection(section.cfg, space, bc);
    }

    write_text(dir / "trace.csv", trace_csv(trace));
    if (trace.last_converged_state)
      write_state_artifacts(cfg, dir, space, *trace.last_converged_state, "", log);

    log << "steps=" << trace.steps.size() << " total_iterations=" << trace.total_iterations();
    if (trace.last_converged_re) log << " last_converged_Re=" << g_fmt(*trace.last_converged_re);
    log << "\n";
    if (trace.critical_re_estimate)
      log << "critical Re estimate: " << g_fmt(*trace.critical_re_estimate) << "\n";

    bool complete;
    if (!section.schedule.empty()) {
      complete = trace.last_converged_re &&
                 *trace.last_converged_re >= section.schedule.back();
    } else {
      complete = trace.reached_target(section.cfg.re_target);
    }
    return complete ? 0 : 2;
  } catch (const MshParseError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_sweep(const std::string& config_path, std::ostream& log) {
  RunConfig cfg;
  if (int rc = run_config_guard(config_path, log, cfg)) return rc;
  if (!cfg.sweep) {
    log << "config error: sweep: section missing\n";
    return 1;
  }
  try {
    const TaylorHoodSpace space(make_geometry(cfg.geometry));
    const BoundaryConditions bc = lid_cavity_bc();
    const fs::path dir = prepare_output_dir(cfg);

    std::vector<double> sigmas = cfg.sweep->sigmas;
    std::sort(sigmas.begin(), sigmas.end());
    sigmas.erase(std::unique(sigmas.begin(), sigmas.end()), sigmas.end());

    struct SweepRun {
      double sigma = 0.0;
      SolveStatus status = SolveStatus::MaxIterReached;
      int iterations = 0;
      SolutionState state;
      std::string history;
      std::optional<BranchSignature> signature;
    };
    std::vector<SweepRun> runs(sigmas.size());

    const ProbeSet probes = probes_for(cfg.geometry, space.mesh());
    const int jobs = std::max(1, std::min<int>(cfg.sweep->jobs, static_cast<int>(sigmas.size())));
    log << "sweep: " << sigmas.size() << " sigma values, jobs=" << jobs << "\n";

    std::mutex next_mutex;
    size_t next = 0;
    auto worker = [&]() {
      while (true) {
        size_t i;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next >= sigmas.size()) return;
          i = next++;
        }
        SolverConfig sc = cfg.solver;
        sc.sigma = sigmas[i];
        auto [state, history] = solve_stationary(sc, space, bc);
        SweepRun& run = runs[i];
        run.sigma = sigmas[i];
        run.status = history.status;
        run.iterations = history.iterations();
        run.history = history_csv(history);
        if (history.status == SolveStatus::Converged) {
          const Field psi = stream_function(state.u, cfg.output.psi_flip_sign);
          run.signature = branch_signature(psi, probes);
        }
        run.state = std::move(state);
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    // single collector writes everything in sigma-sorted order
    std::string summary = "sigma,status,iterations,signature\n";
    std::string records = "sigma,signature,psi_min,psi_max\n";
    std::set<std::string> converged_patterns;
    for (const auto& run : runs) {
      write_text(dir / ("history_sigma_" + g_fmt(run.sigma) + ".csv"), run.history);
      summary += g_fmt(run.sigma);
      summary += ',';
      summary += to_string(run.status);
      summary += ',' + std::to_string(run.iterations) + ',';
      if (run.signature) {
        summary += run.signature->pattern();
        converged_patterns.insert(run.signature->pattern());
        records += g_fmt(run.sigma);
        records += ',' + run.signature->pattern() + ',' + g_fmt(run.signature->psi_min) + ',' +
                   g_fmt(run.signature->psi_max) + '\n';
      }
      summary += '\n';
      log << "sigma=" << g_fmt(run.sigma) << " status=" << to_string(run.status)
          << " iterations=" << run.iterations
          << (run.signature ? " signature=" + run.signature->pattern() : "") << "\n";
    }
    write_text(dir / "sweep.csv", summary);
    write_text(dir / "signatures.csv", records);

    log << converged_patterns.size() << " distinct branch signature(s) among converged runs";
    if (!converged_patterns.empty()) {
      log << ":";
      for (const auto& p : converged_patterns) log << ' ' << p;
    }
    log << "\n";
    return converged_patterns.empty() ? 2 : 0;
  } catch (const MshParseError& e) {
    log << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_mesh_info(const std::string& target, std::ostream& log) {
  try {
    Mesh mesh;
    if (target.rfind("square:", 0) == 0) {
      mesh = unit_square_mesh(std::stoi(target.substr(7)));
    } else if (target.rfind("semi_ellipse:", 0) == 0) {
      mesh = semi_ellipse_mesh(std::stoi(target.substr(13)));
    } else {
      mesh = read_msh_file(target);
    }
    mesh.validate();
    const TaylorHoodSpace space{Mesh(mesh)};

    std::map<int, int> edges_per_tag;
    for (const auto& be : mesh.boundary_edges) edges_per_tag[be.tag]++;

    log << "vertices: " << mesh.num_vertices() << "\n";
    log << "triangles: " << mesh.num_triangles() << "\n";
    log << "unique edges: " << space.num_edges() << "\n";
    log << "boundary edges:";
    for (const auto& [tag, count] : edges_per_tag) log << " tag" << tag << "=" << count;
    log << "\n";
    log << "total area: " << g_fmt(mesh.total_area()) << "\n";
    log << "velocity dofs: " << space.n_u() << "\n";
    log << "pressure dofs: " << space.n_p() << "\n";
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cavityflow
