#ifndef CAVITYFLOW_QUADRATURE_HPP
#define CAVITYFLOW_QUADRATURE_HPP

#include <array>
#include <vector>

namespace cavityflow {

/// Quadrature rule on the reference triangle {(x,y): x,y >= 0, x+y <= 1}.
/// Points are barycentric (l0, l1, l2); weights are positive and sum to the
/// reference-triangle area 1/2.
class QuadratureRule {
public:
  struct Point {
    std::array<double, 3> bary;
    double weight;
  };

  /// Smallest built-in rule exact for polynomials of total degree `degree`.
  /// Degrees <= 5 use symmetric rules (3- and 7-point); higher degrees use
  /// a collapsed-coordinate Gauss rule.
  static QuadratureRule for_degree(int degree);

  int degree() const { return degree_; }
  const std::vector<Point>& points() const { return points_; }

private:
  QuadratureRule(int degree, std::vector<Point> pts)
      : degree_(degree), points_(std::move(pts)) {}
  int degree_;
  std::vector<Point> points_;
};

}  // namespace cavityflow

#endif
