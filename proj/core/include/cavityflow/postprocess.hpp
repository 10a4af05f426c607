#ifndef CAVITYFLOW_POSTPROCESS_HPP
#define CAVITYFLOW_POSTPROCESS_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cavityflow/nonlinear.hpp"

namespace cavityflow {

/// Stream function psi in the P2 scalar space: solves  div grad psi = -du1/dx2
/// + du2/dx1  with psi = 0 on the whole boundary. `flip_sign` negates the
/// right-hand side for comparison against the opposite sign convention.
Field stream_function(const Field& u, bool flip_sign = false);

/// Scalar vorticity w = du2/dx1 - du1/dx2 as an L2 projection onto the P1
/// space (consistent mass matrix).
Field vorticity(const Field& u);

/// L2 norm of the element-wise strong divergence of a P2 velocity field.
double divergence_norm(const Field& u);

struct Probe {
  std::string name;
  Eigen::Vector2d point;
};

struct ProbeSet {
  std::vector<Probe> probes;

  /// Cavity centerline profiles x1 = 0.5 and x2 = 0.5, n uniform samples each.
  static ProbeSet square_centerlines(int n);

  /// Mid-depth classification probes for the 2:1 semi-elliptical cavity:
  /// left quarter, center, right quarter at x2 = -0.25.
  static ProbeSet semi_ellipse_mid_depth();
};

/// Signs of psi at three classification probes plus the global coefficient
/// range. Two solutions belong to distinct branches iff the sign patterns
/// differ.
struct BranchSignature {
  std::array<int, 3> signs = {0, 0, 0};  // -1 / 0 / +1
  double psi_min = 0.0;
  double psi_max = 0.0;

  std::string pattern() const;  // e.g. "++-"
};

BranchSignature branch_signature(const Field& psi, const ProbeSet& probes);

inline bool distinct_branches(const BranchSignature& a, const BranchSignature& b) {
  return a.signs != b.signs;
}

/// Legacy VTK ASCII (v3.0, DATASET UNSTRUCTURED_GRID). P2 fields are
/// down-sampled to vertex values; velocity is written as 3-component
/// vectors with zero third component.
void export_vtk(const Mesh& mesh,
                const std::vector<std::pair<std::string, const Field*>>& fields,
                std::ostream& out);
void export_vtk_file(const Mesh& mesh,
                     const std::vector<std::pair<std::string, const Field*>>& fields,
                     const std::string& path);

/// CSV exports (header row, comma delimiter, LF endings, 17 significant
/// digits).
std::string history_csv(const ConvergenceHistory& history);

struct ProfileSample {
  std::string line;  // "x1=0.5" or "x2=0.5"
  double param = 0.0;
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
};
/// Velocity along the two cavity centerlines, n uniform samples per line.
std::vector<ProfileSample> sample_profiles(const Field& u, int samples_per_line);
std::string profiles_csv(const std::vector<ProfileSample>& samples);

}  // namespace cavityflow

#endif
