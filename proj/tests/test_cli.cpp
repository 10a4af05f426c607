#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "cavityflow/commands.hpp"

using namespace cavityflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cavityflow_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path file(const std::string& name, const std::string& text) const {
    const fs::path p = path / name;
    std::ofstream(p) << text;
    return p;
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("config parsing: defaults and full round trip") {
  const RunConfig cfg = parse_run_config(R"({
    "geometry": {"type": "semi_ellipse", "m": 12},
    "solver": {"reynolds": 250, "form": "skew_symmetric", "method": "method2",
               "sigma": 0.8, "tol": 1e-9, "max_iter": 55},
    "sweep": {"sigmas": [0.5, 0.9], "jobs": 2},
    "output": {"dir": "somewhere", "vorticity": true}
  })");
  CHECK(cfg.geometry.kind == GeometryConfig::Kind::SemiEllipse);
  CHECK(cfg.geometry.m == 12);
  CHECK(cfg.solver.reynolds == 250.0);
  CHECK(cfg.solver.form == ConvectionForm::SkewSymmetric);
  CHECK(cfg.solver.method == Linearization::Method2);
  CHECK(cfg.solver.sigma == 0.8);
  CHECK(cfg.solver.tol == 1e-9);
  CHECK(cfg.solver.max_iter == 55);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->sigmas.size() == 2);
  CHECK(cfg.sweep->jobs == 2);
  CHECK(cfg.output.dir == "somewhere");
  CHECK(cfg.output.vorticity);
  CHECK(!cfg.continuation.has_value());
}

TEST_CASE("config parsing: errors name the offending key") {
  CHECK_THROWS_WITH_AS(parse_run_config(R"({"solver": {"sigma": 1.5}})"),
                       doctest::Contains("sigma"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_run_config(R"({"solver": {"renolds": 10}})"),
                       doctest::Contains("renolds"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_run_config(R"({"geometri": {}})"), doctest::Contains("geometri"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_run_config(R"({"sweep": {"sigmas": []}})"),
                       doctest::Contains("sigmas"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_run_config(R"({"geometry": {"type": "msh"}})"),
                       doctest::Contains("path"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("{not json"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_run_config(R"({"continuation": {"mode": "bogus"}})"),
                       doctest::Contains("mode"), ConfigError);
}

TEST_CASE("cmd_solve: converged run writes artifacts and exits 0") {
  TempDir tmp;
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("solve.json", R"({
    "geometry": {"type": "square", "m": 8},
    "solver": {"reynolds": 50, "method": "newton"},
    "output": {"dir": ")" + out.string() + R"(", "csv_profiles": true, "vorticity": true}
  })");
  std::ostringstream log;
  CHECK(cmd_solve(cfg.string(), log) == 0);
  CHECK(fs::exists(out / "history.csv"));
  CHECK(fs::exists(out / "solution.vtk"));
  CHECK(fs::exists(out / "psi.vtk"));
  CHECK(fs::exists(out / "profiles.csv"));

  // last epsilon in history.csv is at most the default tolerance
  std::istringstream hist(read_file(out / "history.csv"));
  std::string line, last;
  std::getline(hist, line);  // header
  while (std::getline(hist, line))
    if (!line.empty()) last = line;
  const double eps = std::strtod(last.c_str() + last.find(',') + 1, nullptr);
  CHECK(eps <= 1e-8);
}

TEST_CASE("cmd_solve: non-convergence exits 2 but still writes artifacts") {
  TempDir tmp;
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("solve.json", R"({
    "geometry": {"type": "square", "m": 8},
    "solver": {"reynolds": 100, "method": "method2", "sigma": 0.4, "max_iter": 2},
    "output": {"dir": ")" + out.string() + R"("}
  })");
  std::ostringstream log;
  CHECK(cmd_solve(cfg.string(), log) == 2);
  CHECK(fs::exists(out / "history.csv"));
  CHECK(log.str().find("max_iter") != std::string::npos);
}

TEST_CASE("cmd_solve: config errors exit 1 with the key named") {
  TempDir tmp;
  const fs::path cfg = tmp.file("bad.json", R"({
    "geometry": {"type": "square", "m": 8},
    "solver": {"sigma": 1.5}
  })");
  std::ostringstream log;
  CHECK(cmd_solve(cfg.string(), log) == 1);
  CHECK(log.str().find("sigma") != std::string::npos);
  std::ostringstream log2;
  CHECK(cmd_solve((tmp.path / "missing.json").string(), log2) == 1);
}

TEST_CASE("cmd_solve: deterministic artifacts on rerun") {
  TempDir tmp;
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("solve.json", R"({
    "geometry": {"type": "square", "m": 6},
    "solver": {"reynolds": 80, "method": "newton"},
    "output": {"dir": ")" + out.string() + R"("}
  })");
  std::ostringstream log;
  REQUIRE(cmd_solve(cfg.string(), log) == 0);
  const std::string history1 = read_file(out / "history.csv");
  const std::string vtk1 = read_file(out / "solution.vtk");
  REQUIRE(cmd_solve(cfg.string(), log) == 0);
  CHECK(read_file(out / "history.csv") == history1);
  CHECK(read_file(out / "solution.vtk") == vtk1);
}

TEST_CASE("CAVITYFLOW_OUTPUT overrides the configured directory") {
  TempDir tmp;
  const fs::path configured = tmp.path / "configured";
  const fs::path overridden = tmp.path / "overridden";
  const fs::path cfg = tmp.file("solve.json", R"({
    "geometry": {"type": "square", "m": 4},
    "solver": {"reynolds": 10, "method": "newton"},
    "output": {"dir": ")" + configured.string() + R"(", "vtk": false, "stream_function": false}
  })");
  ::setenv("CAVITYFLOW_OUTPUT", overridden.string().c_str(), 1);
  std::ostringstream log;
  const int rc = cmd_solve(cfg.string(), log);
  ::unsetenv("CAVITYFLOW_OUTPUT");
  CHECK(rc == 0);
  CHECK(fs::exists(overridden / "history.csv"));
  CHECK(!fs::exists(configured));
}

TEST_CASE("cmd_continue: schedule mode writes a trace") {
  TempDir tmp;
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("cont.json", R"({
    "geometry": {"type": "square", "m": 6},
    "solver": {"method": "newton"},
    "continuation": {"re_start": 50, "schedule": [50, 100, 150], "step_iterations": 6},
    "output": {"dir": ")" + out.string() + R"(", "vtk": false, "stream_function": false}
  })");
  std::ostringstream log;
  CHECK(cmd_continue(cfg.string(), log) == 0);
  const std::string trace = read_file(out / "trace.csv");
  CHECK(trace.rfind("step,Re,delta,status,iterations,eps_final\n", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 4);  // header + 3 steps
  CHECK(log.str().find("total_iterations=18") != std::string::npos);
}

TEST_CASE("cmd_continue: zero budget exits 2 with an empty trace") {
  TempDir tmp;
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("cont.json", R"({
    "geometry": {"type": "square", "m": 4},
    "solver": {"method": "newton"},
    "continuation": {"re_start": 100, "delta_start": 100, "budget": 0},
    "output": {"dir": ")" + out.string() + R"(", "vtk": false, "stream_function": false}
  })");
  std::ostringstream log;
  CHECK(cmd_continue(cfg.string(), log) == 2);
  const std::string trace = read_file(out / "trace.csv");
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 1);  // header only
}

TEST_CASE("cmd_continue: missing section exits 1") {
  TempDir tmp;
  const fs::path cfg = tmp.file("cont.json", R"({
    "geometry": {"type": "square", "m": 4}
  })");
  std::ostringstream log;
  CHECK(cmd_continue(cfg.string(), log) == 1);
  CHECK(log.str().find("continuation") != std::string::npos);
}

TEST_CASE("cmd_sweep: summary and per-sigma artifacts in sorted order") {
  TempDir tmp;
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("sweep.json", R"({
    "geometry": {"type": "square", "m": 6},
    "solver": {"reynolds": 60, "method": "method2"},
    "sweep": {"sigmas": [1.0, 0.6], "jobs": 2},
    "output": {"dir": ")" + out.string() + R"(", "vtk": false}
  })");
  std::ostringstream log;
  CHECK(cmd_sweep(cfg.string(), log) == 0);
  CHECK(fs::exists(out / "sweep.csv"));
  CHECK(fs::exists(out / "history_sigma_0.6.csv"));
  CHECK(fs::exists(out / "history_sigma_1.csv"));

  std::istringstream sweep(read_file(out / "sweep.csv"));
  std::string line;
  std::getline(sweep, line);
  CHECK(line == "sigma,status,iterations,signature");
  std::getline(sweep, line);
  CHECK(line.rfind("0.6,", 0) == 0);  // sigma-sorted rows
  std::getline(sweep, line);
  CHECK(line.rfind("1,", 0) == 0);
  CHECK(log.str().find("distinct branch signature") != std::string::npos);
  const std::string records = read_file(out / "signatures.csv");
  CHECK(records.rfind("sigma,signature,psi_min,psi_max\n", 0) == 0);

  // deterministic rerun, including with a different job count
  const std::string sweep1 = read_file(out / "sweep.csv");
  std::ostringstream log2;
  const fs::path cfg1 = tmp.file("sweep1.json", R"({
    "geometry": {"type": "square", "m": 6},
    "solver": {"reynolds": 60, "method": "method2"},
    "sweep": {"sigmas": [1.0, 0.6], "jobs": 1},
    "output": {"dir": ")" + out.string() + R"(", "vtk": false}
  })");
  CHECK(cmd_sweep(cfg1.string(), log2) == 0);
  CHECK(read_file(out / "sweep.csv") == sweep1);
}

TEST_CASE("cmd_sweep: missing sweep section exits 1") {
  TempDir tmp;
  const fs::path cfg = tmp.file("sweep.json", R"({
    "geometry": {"type": "square", "m": 4}
  })");
  std::ostringstream log;
  CHECK(cmd_sweep(cfg.string(), log) == 1);
}

TEST_CASE("cmd_mesh_info: builtin targets and failures") {
  std::ostringstream log;
  CHECK(cmd_mesh_info("square:4", log) == 0);
  CHECK(log.str().find("vertices: 25") != std::string::npos);
  CHECK(log.str().find("triangles: 32") != std::string::npos);
  CHECK(log.str().find("tag1=4") != std::string::npos);

  std::ostringstream log2;
  CHECK(cmd_mesh_info("semi_ellipse:8", log2) == 0);
  CHECK(log2.str().find("pressure dofs:") != std::string::npos);

  std::ostringstream log3;
  CHECK(cmd_mesh_info("/nonexistent/mesh.msh", log3) == 1);
}

TEST_CASE("cmd_solve reads MSH geometry") {
  TempDir tmp;
  const fs::path mesh_path = tmp.path / "square.msh";
  write_msh_file(unit_square_mesh(6), mesh_path.string());
  const fs::path out = tmp.path / "out";
  const fs::path cfg = tmp.file("solve.json", R"({
    "geometry": {"type": "msh", "path": ")" + mesh_path.string() + R"("},
    "solver": {"reynolds": 40, "method": "newton"},
    "output": {"dir": ")" + out.string() + R"(", "vtk": false, "stream_function": false}
  })");
  std::ostringstream log;
  CHECK(cmd_solve(cfg.string(), log) == 0);
  CHECK(fs::exists(out / "history.csv"));
}

TEST_SUITE_END();
