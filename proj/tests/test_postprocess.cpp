#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "cavityflow/postprocess.hpp"
#include "support/oracles.hpp"

using namespace cavityflow;

TEST_SUITE_BEGIN("postprocess");

TEST_CASE("stream function of the zero field is zero") {
  const TaylorHoodSpace space(unit_square_mesh(4));
  const Field psi = stream_function(Field::zero(space, FieldRole::Velocity));
  CHECK(psi.coeffs.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("stream function of rigid rotation vs finite-difference oracle") {
  // u = (-x2, x1): the right-hand side -du1/dx2 + du2/dx1 = 2 everywhere,
  // so psi solves lap(psi) = 2 with psi = 0 on the square boundary
  const TaylorHoodSpace space(unit_square_mesh(24));
  const Field u = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(-x.y(), x.x()); });
  const Field psi = stream_function(u);

  const double fd = oracles::fd_poisson_center(128, 2.0);
  CHECK(fd == doctest::Approx(-0.147342704547).epsilon(5e-4));  // frozen oracle value
  CHECK(psi.eval_scalar({0.5, 0.5}) == doctest::Approx(fd).epsilon(2e-3));
  CHECK(std::abs(psi.eval_scalar({0.5, 0.5}) - fd) < 3e-4);
}

TEST_CASE("stream function vanishes on every boundary node") {
  const TaylorHoodSpace space(unit_square_mesh(6));
  const Field u = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y() * x.y(), x.x()); });
  const Field psi = stream_function(u);
  for (int n = 0; n < space.num_scalar_nodes(); ++n)
    if (space.is_boundary_node(n)) CHECK(psi.coeffs[n] == 0.0);
}

TEST_CASE("stream function sign flip negates the field") {
  const TaylorHoodSpace space(unit_square_mesh(8));
  const Field u = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(-x.y(), x.x()); });
  const Field psi = stream_function(u, false);
  const Field flipped = stream_function(u, true);
  CHECK((psi.coeffs + flipped.coeffs).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("stream function is linear in the velocity") {
  const TaylorHoodSpace space(unit_square_mesh(6));
  const Field a = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y(), -x.x() * x.x()); });
  const Field b = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(std::sin(x.x()), x.y()); });
  Field combo = Field::zero(space, FieldRole::Velocity);
  combo.coeffs = 2.0 * a.coeffs - 0.5 * b.coeffs;
  const Field psi_combo = stream_function(combo);
  const Eigen::VectorXd expect =
      2.0 * stream_function(a).coeffs - 0.5 * stream_function(b).coeffs;
  CHECK((psi_combo.coeffs - expect).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("vorticity of linear shear and rigid rotation") {
  const TaylorHoodSpace space(unit_square_mesh(5));
  const Field shear = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y(), 0.0); });
  const Field w1 = vorticity(shear);
  for (int v = 0; v < space.num_vertices(); ++v)
    CHECK(w1.coeffs[v] == doctest::Approx(-1.0).epsilon(1e-12));

  const Field rot = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(-x.y(), x.x()); });
  const Field w2 = vorticity(rot);
  for (int v = 0; v < space.num_vertices(); ++v)
    CHECK(w2.coeffs[v] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("vorticity of a gradient field vanishes") {
  const TaylorHoodSpace space(unit_square_mesh(6));
  // gradient of the P2 interpolant of x1^2 + x2^2 is exactly (2 x1, 2 x2)
  const Field grad = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(2.0 * x.x(), 2.0 * x.y()); });
  const Field w = vorticity(grad);
  CHECK(w.coeffs.lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("divergence norm basics") {
  const TaylorHoodSpace space(unit_square_mesh(5));
  const Field solenoidal = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.x(), -x.y()); });
  CHECK(divergence_norm(solenoidal) < 1e-13);

  const Field expanding = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.x(), 0.0); });
  CHECK(divergence_norm(expanding) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divergence norm of the converged Re=100 cavity: regression baseline") {
  // deterministic solve; the strong divergence concentrates at the lid
  // corners and is a mesh-dependent constant, frozen from the first run
  const TaylorHoodSpace space(unit_square_mesh(32));
  SolverConfig cfg;
  cfg.reynolds = 100.0;
  cfg.method = Linearization::Newton;
  auto [state, history] = solve_stationary(cfg, space, lid_cavity_bc());
  REQUIRE(history.status == SolveStatus::Converged);
  CHECK(divergence_norm(state.u) == doctest::Approx(0.36537828828983576).epsilon(1e-9));
}

TEST_CASE("branch signatures classify probe sign patterns") {
  const TaylorHoodSpace space(semi_ellipse_mesh(8));
  const ProbeSet probes = ProbeSet::semi_ellipse_mid_depth();

  const Field zero = Field::zero(space, FieldRole::ScalarP2);
  const BranchSignature sig0 = branch_signature(zero, probes);
  CHECK(sig0.signs == std::array<int, 3>{0, 0, 0});
  CHECK(sig0.pattern() == "000");

  const Field fa = interpolate_scalar(space, FieldRole::ScalarP2,
                                      [](const Eigen::Vector2d& x) { return x.x() + 0.7; });
  const Field fb = interpolate_scalar(space, FieldRole::ScalarP2,
                                      [](const Eigen::Vector2d& x) { return x.x() * x.x() - 0.1; });
  const BranchSignature sa = branch_signature(fa, probes);
  const BranchSignature sb = branch_signature(fb, probes);
  CHECK(sa.pattern() == "+++");
  CHECK(sb.pattern() == "+-+");
  CHECK(distinct_branches(sa, sb));
  CHECK(!distinct_branches(sa, branch_signature(fa, probes)));
  CHECK(sa.psi_max == doctest::Approx(1.7));
  CHECK(sa.psi_min == doctest::Approx(-0.3));
}

TEST_CASE("probe points lie inside their domains") {
  const TaylorHoodSpace square(unit_square_mesh(4));
  const TaylorHoodSpace ellipse(semi_ellipse_mesh(8));
  std::array<double, 3> bary;
  for (const auto& p : ProbeSet::square_centerlines(11).probes)
    CHECK_NOTHROW(square.locate(p.point, bary));
  for (const auto& p : ProbeSet::semi_ellipse_mid_depth().probes)
    CHECK_NOTHROW(ellipse.locate(p.point, bary));
}

TEST_CASE("vtk export: header, cells, and per-field blocks") {
  const TaylorHoodSpace space(unit_square_mesh(1));
  const Field zero_scalar = Field::zero(space, FieldRole::ScalarP1);
  const Field vel = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.x(), 2.0); });
  std::ostringstream out;
  export_vtk(space.mesh(), {{"marker", &zero_scalar}, {"velocity", &vel}}, out);
  const std::string text = out.str();

  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);  // exact first line
  CHECK(text.find("DATASET UNSTRUCTURED_GRID\n") != std::string::npos);
  CHECK(text.find("POINTS 4 double\n") != std::string::npos);
  CHECK(text.find("CELLS 2 8\n") != std::string::npos);
  CHECK(text.find("CELL_TYPES 2\n5\n5\n") != std::string::npos);
  CHECK(text.find("POINT_DATA 4\n") != std::string::npos);
  CHECK(text.find("SCALARS marker double 1\nLOOKUP_TABLE default\n") != std::string::npos);
  CHECK(text.find("VECTORS velocity double\n") != std::string::npos);
}

TEST_CASE("vtk format lint: token counts are consistent") {
  const TaylorHoodSpace space(semi_ellipse_mesh(4));
  const Field psi = Field::zero(space, FieldRole::ScalarP2);
  std::ostringstream out;
  export_vtk(space.mesh(), {{"psi", &psi}}, out);

  std::istringstream in(out.str());
  std::string line;
  int points = -1, cells = -1, cell_entries = -1;
  int point_rows = 0, cell_rows = 0;
  bool in_points = false, in_cells = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "POINTS") { ls >> points; in_points = true; in_cells = false; continue; }
    if (tok == "CELLS") { ls >> cells >> cell_entries; in_cells = true; in_points = false; continue; }
    if (tok == "CELL_TYPES") { in_cells = in_points = false; continue; }
    if (in_points && !line.empty()) ++point_rows;
    if (in_cells && !line.empty()) ++cell_rows;
  }
  CHECK(points == space.mesh().num_vertices());
  CHECK(point_rows == points);
  CHECK(cells == space.mesh().num_triangles());
  CHECK(cell_rows == cells);
  CHECK(cell_entries == 4 * cells);
}

TEST_CASE("history csv: header plus one row per iteration, bitwise round-trip") {
  ConvergenceHistory history;
  history.epsilons = {0.25, 1.0 / 3.0, 7.25e-9};
  history.status = SolveStatus::Converged;
  const std::string csv = history_csv(history);

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "k,eps");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const int k = std::atoi(line.substr(0, comma).c_str());
    const double eps = std::strtod(line.c_str() + comma + 1, nullptr);
    CHECK(eps == history.epsilons[k - 1]);  // %.17g round-trips doubles exactly
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("centerline profiles are monotone in the parameter") {
  const TaylorHoodSpace space(unit_square_mesh(8));
  const Field u = interpolate_velocity(
      space, [](const Eigen::Vector2d& x) { return Eigen::Vector2d(x.y(), -x.x()); });
  const auto samples = sample_profiles(u, 21);
  REQUIRE(samples.size() == 42);
  for (size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].line == samples[i - 1].line)
      CHECK(samples[i].param > samples[i - 1].param);
  }
  const std::string csv = profiles_csv(samples);
  CHECK(csv.rfind("line,param,x1,x2,u1,u2\n", 0) == 0);
}

TEST_SUITE_END();
