#include "cavityflow/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/LU>
#include <stdexcept>

namespace cavityflow {

namespace p2 {

std::array<double, 6> values(const std::array<double, 3>& bary) {
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  return {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
          4.0 * l0 * l1,         4.0 * l1 * l2,         4.0 * l2 * l0};
}

std::array<Eigen::Vector2d, 6> ref_gradients(const std::array<double, 3>& bary) {
  const double l0 = bary[0], l1 = bary[1], l2 = bary[2];
  const Eigen::Vector2d g0(-1.0, -1.0), g1(1.0, 0.0), g2(0.0, 1.0);
  return {(4.0 * l0 - 1.0) * g0,
          (4.0 * l1 - 1.0) * g1,
          (4.0 * l2 - 1.0) * g2,
          4.0 * (l0 * g1 + l1 * g0),
          4.0 * (l1 * g2 + l2 * g1),
          4.0 * (l2 * g0 + l0 * g2)};
}

}  // namespace p2

namespace p1 {

std::array<Eigen::Vector2d, 3> ref_gradients() {
  return {Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)};
}

}  // namespace p1

TaylorHoodSpace::TaylorHoodSpace(Mesh mesh) : mesh_(std::move(mesh)) {
  const int nv = mesh_.num_vertices();
  const int nt = mesh_.num_triangles();

  std::map<std::array<int, 2>, int> edge_index;
  auto key = [](int a, int b) {
    return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
  };
  for (const auto& tri : mesh_.triangles)
    for (int e = 0; e < 3; ++e) edge_index.emplace(key(tri[e], tri[(e + 1) % 3]), 0);
  edges_.reserve(edge_index.size());
  for (auto& [k, idx] : edge_index) {
    idx = static_cast<int>(edges_.size());
    edges_.push_back(k);
  }

  tri_nodes_.resize(nt);
  areas_.resize(nt);
  inv_jt_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh_.triangles[t];
    tri_nodes_[t] = {tri[0],
                     tri[1],
                     tri[2],
                     nv + edge_index[key(tri[0], tri[1])],
                     nv + edge_index[key(tri[1], tri[2])],
                     nv + edge_index[key(tri[2], tri[0])]};
    Eigen::Matrix2d jac;
    jac.col(0) = mesh_.vertices[tri[1]] - mesh_.vertices[tri[0]];
    jac.col(1) = mesh_.vertices[tri[2]] - mesh_.vertices[tri[0]];
    const double det = jac.determinant();
    areas_[t] = 0.5 * det;
    inv_jt_[t] = jac.inverse().transpose();
  }

  // boundary node tags: mark walls first, lid second so the lid wins at
  // shared corner vertices
  node_tags_.assign(num_scalar_nodes(), 0);
  auto mark = [&](int wanted) {
    for (const auto& be : mesh_.boundary_edges) {
      if (be.tag != wanted) continue;
      node_tags_[be.a] = be.tag;
      node_tags_[be.b] = be.tag;
      node_tags_[nv + edge_index[key(be.a, be.b)]] = be.tag;
    }
  };
  std::vector<int> tag_set;
  for (const auto& be : mesh_.boundary_edges) tag_set.push_back(be.tag);
  std::sort(tag_set.begin(), tag_set.end());
  tag_set.erase(std::unique(tag_set.begin(), tag_set.end()), tag_set.end());
  for (auto it = tag_set.rbegin(); it != tag_set.rend(); ++it)
    if (*it != kLidTag) mark(*it);
  if (std::find(tag_set.begin(), tag_set.end(), kLidTag) != tag_set.end()) mark(kLidTag);
  tags_present_ = tag_set;
}

Eigen::Vector2d TaylorHoodSpace::node_position(int node) const {
  const int nv = num_vertices();
  if (node < nv) return mesh_.vertices[node];
  const auto& e = edges_[node - nv];
  return 0.5 * (mesh_.vertices[e[0]] + mesh_.vertices[e[1]]);
}

int TaylorHoodSpace::locate(const Eigen::Vector2d& point, std::array<double, 3>& bary) const {
  constexpr double tol = 1e-10;
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    const auto& tri = mesh_.triangles[t];
    const Eigen::Vector2d rel = point - mesh_.vertices[tri[0]];
    const Eigen::Vector2d xi = inv_jt_[t].transpose() * rel;
    const double l1 = xi.x(), l2 = xi.y(), l0 = 1.0 - l1 - l2;
    if (l0 >= -tol && l1 >= -tol && l2 >= -tol) {
      bary = {l0, l1, l2};
      return t;
    }
  }
  throw std::domain_error("point outside the mesh");
}

Field Field::zero(const TaylorHoodSpace& space, FieldRole role) {
  Field f;
  f.space = &space;
  f.role = role;
  int n = 0;
  switch (role) {
    case FieldRole::Velocity: n = space.n_u(); break;
    case FieldRole::Pressure: n = space.n_p(); break;
    case FieldRole::ScalarP2: n = space.num_scalar_nodes(); break;
    case FieldRole::ScalarP1: n = space.num_vertices(); break;
  }
  f.coeffs = Eigen::VectorXd::Zero(n);
  return f;
}

double Field::eval_scalar(const Eigen::Vector2d& point) const {
  if (role == FieldRole::Velocity) throw std::invalid_argument("eval_scalar on a velocity field");
  std::array<double, 3> bary;
  const int t = space->locate(point, bary);
  if (role == FieldRole::Pressure || role == FieldRole::ScalarP1) {
    const auto& tri = space->mesh().triangles[t];
    return bary[0] * coeffs[tri[0]] + bary[1] * coeffs[tri[1]] + bary[2] * coeffs[tri[2]];
  }
  const auto N = p2::values(bary);
  const auto& nodes = space->scalar_nodes(t);
  double v = 0.0;
  for (int i = 0; i < 6; ++i) v += N[i] * coeffs[nodes[i]];
  return v;
}

Eigen::Vector2d Field::eval_velocity(const Eigen::Vector2d& point) const {
  if (role != FieldRole::Velocity) throw std::invalid_argument("eval_velocity on a scalar field");
  std::array<double, 3> bary;
  const int t = space->locate(point, bary);
  const auto N = p2::values(bary);
  const auto& nodes = space->scalar_nodes(t);
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int i = 0; i < 6; ++i) {
    v.x() += N[i] * coeffs[space->udof(nodes[i], 0)];
    v.y() += N[i] * coeffs[space->udof(nodes[i], 1)];
  }
  return v;
}

namespace {

// sum of squared field values at quadrature points, element-wise
double l2_sq(const Field& f, const Eigen::VectorXd& coeffs) {
  const TaylorHoodSpace& space = *f.space;
  const auto rule = QuadratureRule::for_degree(5);
  double acc = 0.0;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const double jac2 = 2.0 * space.area(t);
    const auto& nodes = space.scalar_nodes(t);
    const auto& tri = space.mesh().triangles[t];
    double el = 0.0;
    for (const auto& qp : rule.points()) {
      double v2 = 0.0;
      switch (f.role) {
        case FieldRole::Velocity: {
          const auto N = p2::values(qp.bary);
          double ux = 0.0, uy = 0.0;
          for (int i = 0; i < 6; ++i) {
            ux += N[i] * coeffs[space.udof(nodes[i], 0)];
            uy += N[i] * coeffs[space.udof(nodes[i], 1)];
          }
          v2 = ux * ux + uy * uy;
          break;
        }
        case FieldRole::ScalarP2: {
          const auto N = p2::values(qp.bary);
          double s = 0.0;
          for (int i = 0; i < 6; ++i) s += N[i] * coeffs[nodes[i]];
          v2 = s * s;
          break;
        }
        case FieldRole::Pressure:
        case FieldRole::ScalarP1: {
          const double s = qp.bary[0] * coeffs[tri[0]] + qp.bary[1] * coeffs[tri[1]] +
                           qp.bary[2] * coeffs[tri[2]];
          v2 = s * s;
          break;
        }
      }
      el += qp.weight * v2;
    }
    acc += jac2 * el;
  }
  return acc;
}

}  // namespace

double l2_norm(const Field& field) { return std::sqrt(l2_sq(field, field.coeffs)); }

double l2_diff(const Field& a, const Field& b) {
  if (a.space != b.space || a.role != b.role)
    throw std::invalid_argument("l2_diff: fields must share a space and role");
  return std::sqrt(l2_sq(a, a.coeffs - b.coeffs));
}

Field interpolate_scalar(const TaylorHoodSpace& space, FieldRole role, const ScalarFunc& f) {
  if (role == FieldRole::Velocity) throw std::invalid_argument("scalar role required");
  Field out = Field::zero(space, role);
  const int n = static_cast<int>(out.coeffs.size());
  for (int i = 0; i < n; ++i) out.coeffs[i] = f(space.node_position(i));
  return out;
}

Field interpolate_velocity(const TaylorHoodSpace& space, const VectorFunc& f) {
  Field out = Field::zero(space, FieldRole::Velocity);
  for (int node = 0; node < space.num_scalar_nodes(); ++node) {
    const Eigen::Vector2d v = f(space.node_position(node));
    out.coeffs[space.udof(node, 0)] = v.x();
    out.coeffs[space.udof(node, 1)] = v.y();
  }
  return out;
}

}  // namespace cavityflow
