#include "cavityflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace cavityflow {

namespace {

// Gauss-Legendre nodes/weights on [0,1], Newton iteration on P_n.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // initial guess on [-1,1]
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = 0.5 * (t + 1.0);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // already /2 normalized to [0,1]
  }
}

}  // namespace

QuadratureRule QuadratureRule::for_degree(int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be nonnegative");
  std::vector<Point> pts;
  if (degree <= 2) {
    // 3-point edge-midpoint rule, exact to degree 2
    const double w = 1.0 / 6.0;
    pts = {{{0.5, 0.5, 0.0}, w}, {{0.0, 0.5, 0.5}, w}, {{0.5, 0.0, 0.5}, w}};
    return QuadratureRule(2, std::move(pts));
  }
  if (degree <= 5) {
    // symmetric 7-point rule, exact to degree 5
    const double s = std::sqrt(15.0);
    const double a = (6.0 + s) / 21.0, wa = (155.0 + s) / 2400.0;
    const double b = (6.0 - s) / 21.0, wb = (155.0 - s) / 2400.0;
    pts = {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 80.0},
           {{a, a, 1.0 - 2.0 * a}, wa},
           {{a, 1.0 - 2.0 * a, a}, wa},
           {{1.0 - 2.0 * a, a, a}, wa},
           {{b, b, 1.0 - 2.0 * b}, wb},
           {{b, 1.0 - 2.0 * b, b}, wb},
           {{1.0 - 2.0 * b, b, b}, wb}};
    return QuadratureRule(5, std::move(pts));
  }
  // collapsed square: x = u, y = v(1-u), Jacobian (1-u)
  const int n = degree / 2 + 2;
  std::vector<double> gx, gw;
  gauss_legendre_01(n, gx, gw);
  pts.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = gx[i];
      const double y = gx[j] * (1.0 - gx[i]);
      pts.push_back({{1.0 - x - y, x, y}, gw[i] * gw[j] * (1.0 - gx[i])});
    }
  }
  return QuadratureRule(degree, std::move(pts));
}

}  // namespace cavityflow
