#include <cmath>

#include "doctest.h"
#include "cavityflow/quadrature.hpp"
#include "cavityflow/spaces.hpp"
#include "support/oracles.hpp"

using namespace cavityflow;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("monomial exactness against closed-form factorials") {
  for (int degree : {2, 5, 7, 9, 12}) {
    const auto rule = QuadratureRule::for_degree(degree);
    CAPTURE(degree);
    for (int a = 0; a + 0 <= rule.degree(); ++a) {
      for (int b = 0; a + b <= rule.degree(); ++b) {
        double acc = 0.0;
        for (const auto& qp : rule.points())
          acc += qp.weight * std::pow(qp.bary[1], a) * std::pow(qp.bary[2], b);
        CHECK(acc == doctest::Approx(oracles::monomial_integral(a, b)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("weights are positive and sum to the reference area") {
  for (int degree : {1, 2, 3, 5, 9}) {
    const auto rule = QuadratureRule::for_degree(degree);
    double sum = 0.0;
    for (const auto& qp : rule.points()) {
      CHECK(qp.weight > 0.0);
      sum += qp.weight;
    }
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("barycentric coordinates are valid") {
  for (int degree : {2, 5, 9}) {
    const auto rule = QuadratureRule::for_degree(degree);
    for (const auto& qp : rule.points()) {
      CHECK(qp.bary[0] + qp.bary[1] + qp.bary[2] == doctest::Approx(1.0).epsilon(1e-14));
      for (double l : qp.bary) CHECK(l >= -1e-14);
    }
  }
}

TEST_CASE("P2 basis: partition of unity and gradient sum at quadrature points") {
  const auto rule = QuadratureRule::for_degree(5);
  for (const auto& qp : rule.points()) {
    const auto n = p2::values(qp.bary);
    double sum = 0.0;
    for (double v : n) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    const auto g = p2::ref_gradients(qp.bary);
    Eigen::Vector2d gsum = Eigen::Vector2d::Zero();
    for (const auto& v : g) gsum += v;
    CHECK(gsum.norm() < 1e-14);
  }
}

TEST_CASE("P2 basis: Kronecker property at nodes") {
  // nodes in barycentric coordinates: vertices then edge midpoints 01, 12, 20
  const std::array<std::array<double, 3>, 6> nodes = {{{1, 0, 0},
                                                       {0, 1, 0},
                                                       {0, 0, 1},
                                                       {0.5, 0.5, 0},
                                                       {0, 0.5, 0.5},
                                                       {0.5, 0, 0.5}}};
  for (int a = 0; a < 6; ++a) {
    const auto n = p2::values(nodes[a]);
    for (int b = 0; b < 6; ++b) CHECK(n[b] == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-15));
  }
}

TEST_SUITE_END();
