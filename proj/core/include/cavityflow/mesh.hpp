#ifndef CAVITYFLOW_MESH_HPP
#define CAVITYFLOW_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cavityflow {

/// Boundary tag convention: 1 = moving lid, 2 = stationary wall.
enum BoundaryTag : int {
  kLidTag = 1,
  kWallTag = 2,
};

struct BoundaryEdge {
  int a = -1;      // vertex indices, order as stored (not normalized)
  int b = -1;
  int tag = kWallTag;
};

/// Conforming triangular mesh with tagged boundary edges.
/// Triangles are counterclockwise; every edge touches at most two triangles
/// and the edges touching exactly one are the boundary.
class Mesh {
public:
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  /// Signed area of triangle t (positive for CCW orientation).
  double signed_area(int t) const;

  /// Sum of signed triangle areas.
  double total_area() const;

  /// Checks the structural invariants (orientation, index ranges,
  /// edge manifoldness, boundary coverage); throws std::logic_error on
  /// violation. Intended for generator/parser postconditions and tests.
  void validate() const;
};

/// Uniform triangulation of the unit square [0,1]^2 with m intervals per
/// direction; each cell is split along its lower-left to upper-right
/// diagonal. Top edges (x2 = 1) carry the lid tag, all others the wall tag.
Mesh unit_square_mesh(int m);

/// Half-ellipse {x1^2 + 4 x2^2 <= 1, x2 <= 0} (2:1 axis ratio, lid along
/// x2 = 0) meshed by mapping a structured (2m x m) parameter grid through
/// x1 = s, x2 = -0.5 t sqrt(1 - s^2). The map collapses the s = +-1 grid
/// columns: coincident nodes are merged and zero-area triangles dropped.
/// Lid edges are tagged 1, the curved arc 2. Requires m >= 2.
Mesh semi_ellipse_mesh(int m);

/// Error raised by the MSH parser; carries the 1-based input line number.
class MshParseError : public std::runtime_error {
public:
  MshParseError(int line, const std::string& what);
  int line() const { return line_; }

private:
  int line_;
};

/// Reads a gmsh MSH 2.2 ASCII stream. Consumes 2-node lines (element type 1,
/// first physical tag = boundary tag) and 3-node triangles (type 2); other
/// element types are skipped. Node ids are remapped to dense 0-based indices
/// and clockwise triangles are reoriented. Boundary edges not covered by a
/// line element default to the wall tag; if the file carries no line
/// elements at all, edges on the topmost horizontal line are classified as
/// lid by geometry.
Mesh read_msh(std::istream& in);
Mesh read_msh_file(const std::string& path);

/// Writes MSH 2.2 ASCII round-trippable by read_msh. Coordinates are
/// printed with 17 significant digits.
void write_msh(const Mesh& mesh, std::ostream& out);
void write_msh_file(const Mesh& mesh, const std::string& path);

}  // namespace cavityflow

#endif
