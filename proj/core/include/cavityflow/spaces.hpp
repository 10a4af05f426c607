#ifndef CAVITYFLOW_SPACES_HPP
#define CAVITYFLOW_SPACES_HPP

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "cavityflow/mesh.hpp"
#include "cavityflow/quadrature.hpp"

namespace cavityflow {

/// P2 scalar shape functions on the reference triangle, numbered
/// vertices (0,1,2) then edge midpoints (01, 12, 20).
namespace p2 {
std::array<double, 6> values(const std::array<double, 3>& bary);
/// gradients w.r.t. (xi, eta) with bary = (1-xi-eta, xi, eta)
std::array<Eigen::Vector2d, 6> ref_gradients(const std::array<double, 3>& bary);
}  // namespace p2

namespace p1 {
inline std::array<double, 3> values(const std::array<double, 3>& bary) { return bary; }
std::array<Eigen::Vector2d, 3> ref_gradients();
}  // namespace p1

enum class FieldRole { Velocity, Pressure, ScalarP2, ScalarP1 };

class TaylorHoodSpace;

/// Coefficient vector over a TaylorHoodSpace. Velocity fields interleave
/// components per scalar node (u1, u2); scalar nodes are ordered vertices
/// then edge midpoints.
struct Field {
  const TaylorHoodSpace* space = nullptr;
  FieldRole role = FieldRole::ScalarP1;
  Eigen::VectorXd coeffs;

  static Field zero(const TaylorHoodSpace& space, FieldRole role);

  double eval_scalar(const Eigen::Vector2d& point) const;
  Eigen::Vector2d eval_velocity(const Eigen::Vector2d& point) const;
};

/// Taylor-Hood mixed finite element space: continuous P2 vector velocity
/// and continuous P1 pressure over a triangular mesh.
class TaylorHoodSpace {
public:
  explicit TaylorHoodSpace(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }

  int num_vertices() const { return mesh_.num_vertices(); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_scalar_nodes() const { return num_vertices() + num_edges(); }
  int n_u() const { return 2 * num_scalar_nodes(); }
  int n_p() const { return num_vertices(); }

  /// velocity DOF index of (scalar node, component)
  int udof(int node, int comp) const { return 2 * node + comp; }

  const std::vector<std::array<int, 2>>& edges() const { return edges_; }

  /// six scalar nodes of triangle t: vertices then edge midpoints 01,12,20
  const std::array<int, 6>& scalar_nodes(int t) const { return tri_nodes_[t]; }

  Eigen::Vector2d node_position(int node) const;

  /// boundary tag of a scalar node: 0 interior, else 1/2 with lid
  /// precedence at corner vertices
  int node_tag(int node) const { return node_tags_[node]; }
  bool is_boundary_node(int node) const { return node_tags_[node] != 0; }
  const std::vector<int>& boundary_tags_present() const { return tags_present_; }

  // per-element affine geometry
  double area(int t) const { return areas_[t]; }
  const Eigen::Matrix2d& inv_jacobian_t(int t) const { return inv_jt_[t]; }

  /// brute-force point location; returns triangle index and fills bary.
  /// Throws std::domain_error if the point lies outside the mesh.
  int locate(const Eigen::Vector2d& point, std::array<double, 3>& bary) const;

private:
  Mesh mesh_;
  std::vector<std::array<int, 2>> edges_;           // unique edges, a < b, sorted
  std::vector<std::array<int, 6>> tri_nodes_;       // per-triangle scalar nodes
  std::vector<int> node_tags_;                      // per scalar node
  std::vector<int> tags_present_;
  std::vector<double> areas_;
  std::vector<Eigen::Matrix2d> inv_jt_;             // J^{-T} per triangle
};

inline TaylorHoodSpace build_space(Mesh mesh) { return TaylorHoodSpace(std::move(mesh)); }

/// L2(Omega) norm by element-wise quadrature (degree 5).
double l2_norm(const Field& field);

/// L2 norm of the difference of two same-role fields on one space.
double l2_diff(const Field& a, const Field& b);

using ScalarFunc = std::function<double(const Eigen::Vector2d&)>;
using VectorFunc = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Nodal interpolation onto the P2/P1 scalar spaces or the velocity space.
Field interpolate_scalar(const TaylorHoodSpace& space, FieldRole role, const ScalarFunc& f);
Field interpolate_velocity(const TaylorHoodSpace& space, const VectorFunc& f);

}  // namespace cavityflow

#endif
