#include <cmath>

#include "doctest.h"
#include "cavityflow/spaces.hpp"

using namespace cavityflow;

TEST_SUITE_BEGIN("spaces");

TEST_CASE("dof counts on the smallest square") {
  const TaylorHoodSpace space(unit_square_mesh(1));
  CHECK(space.num_vertices() == 4);
  CHECK(space.num_edges() == 5);  // 4 boundary + 1 diagonal
  CHECK(space.n_u() == 18);
  CHECK(space.n_p() == 4);
}

TEST_CASE("dof counting formulas for the structured split") {
  for (int m : {3, 8}) {
    const TaylorHoodSpace space(unit_square_mesh(m));
    const int v = (m + 1) * (m + 1);
    const int e = 3 * m * m + 2 * m;
    CHECK(space.n_p() == v);
    CHECK(space.num_edges() == e);
    CHECK(space.n_u() == 2 * (v + e));
  }
}

TEST_CASE("lid tag wins at the top corners") {
  const TaylorHoodSpace space(unit_square_mesh(4));
  int lid_nodes = 0, wall_nodes = 0, interior = 0;
  for (int n = 0; n < space.num_scalar_nodes(); ++n) {
    const Eigen::Vector2d x = space.node_position(n);
    const int tag = space.node_tag(n);
    if (x.y() == 1.0) {
      CHECK(tag == kLidTag);  // includes both corners (leaky cavity)
      ++lid_nodes;
    } else if (x.x() == 0.0 || x.x() == 1.0 || x.y() == 0.0) {
      CHECK(tag == kWallTag);
      ++wall_nodes;
    } else {
      CHECK(tag == 0);
      ++interior;
    }
  }
  CHECK(lid_nodes == 9);  // 5 vertices + 4 midpoints on the top row
  CHECK(lid_nodes + wall_nodes + interior == space.num_scalar_nodes());
}

TEST_CASE("every boundary node carries exactly one tag class") {
  const TaylorHoodSpace space(semi_ellipse_mesh(6));
  for (int n = 0; n < space.num_scalar_nodes(); ++n) {
    const int tag = space.node_tag(n);
    CHECK((tag == 0 || tag == kLidTag || tag == kWallTag));
  }
}

TEST_CASE("dof maps are permutation-consistent") {
  const TaylorHoodSpace space(unit_square_mesh(3));
  // each triangle's scalar nodes: 3 vertex nodes then 3 edge nodes, all in range
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const auto& tri = space.mesh().triangles[t];
    for (int i = 0; i < 3; ++i) CHECK(nodes[i] == tri[i]);
    for (int i = 3; i < 6; ++i) {
      CHECK(nodes[i] >= space.num_vertices());
      CHECK(nodes[i] < space.num_scalar_nodes());
    }
    // edge midpoints coincide geometrically with the vertex averages
    CHECK((space.node_position(nodes[3]) -
           0.5 * (space.node_position(tri[0]) + space.node_position(tri[1]))).norm() < 1e-15);
    CHECK((space.node_position(nodes[4]) -
           0.5 * (space.node_position(tri[1]) + space.node_position(tri[2]))).norm() < 1e-15);
    CHECK((space.node_position(nodes[5]) -
           0.5 * (space.node_position(tri[2]) + space.node_position(tri[0]))).norm() < 1e-15);
  }
}

TEST_CASE("eval: constant field reproduces the constant") {
  const TaylorHoodSpace space(unit_square_mesh(3));
  Field f = interpolate_scalar(space, FieldRole::ScalarP2, [](const Eigen::Vector2d&) { return 4.25; });
  CHECK(f.eval_scalar({0.31, 0.62}) == doctest::Approx(4.25).epsilon(1e-15));
}

TEST_CASE("eval: P2 reproduces quadratics exactly") {
  const TaylorHoodSpace space(unit_square_mesh(5));
  auto quad = [](const Eigen::Vector2d& x) { return x.x() * x.x(); };
  Field f = interpolate_scalar(space, FieldRole::ScalarP2, quad);
  CHECK(f.eval_scalar({0.3, 0.3}) == doctest::Approx(0.09).epsilon(1e-14));
  auto quad2 = [](const Eigen::Vector2d& x) {
    return x.x() * x.x() + 2.0 * x.x() * x.y() - x.y() + 3.0;
  };
  Field g = interpolate_scalar(space, FieldRole::ScalarP2, quad2);
  for (const Eigen::Vector2d p : {Eigen::Vector2d{0.17, 0.83}, Eigen::Vector2d{0.5, 0.1}})
    CHECK(g.eval_scalar(p) == doctest::Approx(quad2(p)).epsilon(1e-13));
}

TEST_CASE("eval: P1 interpolant at a centroid is the vertex average") {
  const TaylorHoodSpace space(unit_square_mesh(2));
  auto bilinear = [](const Eigen::Vector2d& x) { return x.x() * x.y(); };
  Field f = interpolate_scalar(space, FieldRole::ScalarP1, bilinear);
  const auto& tri = space.mesh().triangles[0];
  const Eigen::Vector2d centroid =
      (space.mesh().vertices[tri[0]] + space.mesh().vertices[tri[1]] + space.mesh().vertices[tri[2]]) / 3.0;
  const double expected = (bilinear(space.mesh().vertices[tri[0]]) +
                           bilinear(space.mesh().vertices[tri[1]]) +
                           bilinear(space.mesh().vertices[tri[2]])) / 3.0;
  CHECK(f.eval_scalar(centroid) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("eval: point outside the domain raises a domain error") {
  const TaylorHoodSpace space(unit_square_mesh(2));
  Field f = Field::zero(space, FieldRole::ScalarP2);
  CHECK_THROWS_AS(f.eval_scalar({1.5, 0.5}), std::domain_error);
}

TEST_CASE("l2 norms: trivial values") {
  const TaylorHoodSpace space(unit_square_mesh(4));
  CHECK(l2_norm(Field::zero(space, FieldRole::Velocity)) == 0.0);
  Field one = interpolate_scalar(space, FieldRole::ScalarP2, [](const Eigen::Vector2d&) { return 1.0; });
  CHECK(l2_norm(one) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("l2 norm: velocity (x1, 0) has norm 1/sqrt(3)") {
  const TaylorHoodSpace space(unit_square_mesh(3));
  Field u = interpolate_velocity(space, [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(x.x(), 0.0);
  });
  CHECK(l2_norm(u) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("l2 norm of P2 quadratic interpolant equals the analytic norm") {
  // q = x1^2 on the unit square: integral of q^2 = 1/5
  const TaylorHoodSpace space(unit_square_mesh(4));
  Field q = interpolate_scalar(space, FieldRole::ScalarP2,
                               [](const Eigen::Vector2d& x) { return x.x() * x.x(); });
  CHECK(l2_norm(q) == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("l2_diff: identity, symmetry, and norm consistency") {
  const TaylorHoodSpace space(unit_square_mesh(3));
  Field f = interpolate_scalar(space, FieldRole::ScalarP1,
                               [](const Eigen::Vector2d& x) { return x.x() - 2.0 * x.y(); });
  Field z = Field::zero(space, FieldRole::ScalarP1);
  CHECK(l2_diff(f, f) == 0.0);
  CHECK(l2_diff(f, z) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  CHECK(l2_diff(f, z) == doctest::Approx(l2_diff(z, f)).epsilon(1e-14));
}

TEST_CASE("l2_diff: mismatched fields are a usage error") {
  const TaylorHoodSpace a(unit_square_mesh(2));
  const TaylorHoodSpace b(unit_square_mesh(2));
  Field fa = Field::zero(a, FieldRole::ScalarP1);
  Field fb = Field::zero(b, FieldRole::ScalarP1);
  CHECK_THROWS_AS(l2_diff(fa, fb), std::invalid_argument);
  Field fp = Field::zero(a, FieldRole::Pressure);
  Field fv = Field::zero(a, FieldRole::Velocity);
  CHECK_THROWS_AS(l2_diff(fp, fv), std::invalid_argument);
}

TEST_SUITE_END();
