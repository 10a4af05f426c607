#include "cavityflow/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cavityflow/linsolve.hpp"

namespace cavityflow {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// P2 scalar stiffness (grad phi_i, grad phi_j), dimension = scalar nodes
SparseMatrix p2_scalar_stiffness(const TaylorHoodSpace& space) {
  const auto rule = QuadratureRule::for_degree(5);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(space.mesh().num_triangles()) * 36);
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const Eigen::Matrix2d& invjt = space.inv_jacobian_t(t);
    const double jac2 = 2.0 * space.area(t);
    double k_el[6][6] = {};
    for (const auto& qp : rule.points()) {
      const auto dn = p2::ref_gradients(qp.bary);
      Eigen::Vector2d g[6];
      for (int i = 0; i < 6; ++i) g[i] = invjt * dn[i];
      const double w = qp.weight * jac2;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) k_el[i][j] += w * g[i].dot(g[j]);
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) trip.push_back({nodes[i], nodes[j], k_el[i][j]});
  }
  return SparseMatrix::from_triplets(space.num_scalar_nodes(), std::move(trip));
}

// P1 consistent mass matrix, dimension = vertices
SparseMatrix p1_mass(const TaylorHoodSpace& space) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(space.mesh().num_triangles()) * 9);
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& tri = space.mesh().triangles[t];
    const double area = space.area(t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.push_back({tri[i], tri[j], area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0)});
  }
  return SparseMatrix::from_triplets(space.num_vertices(), std::move(trip));
}

// velocity gradient of a P2 field at a quadrature point of element t
Eigen::Matrix2d velocity_gradient(const TaylorHoodSpace& space, const Field& u, int t,
                                  const std::array<Eigen::Vector2d, 6>& ref_grads) {
  const auto& nodes = space.scalar_nodes(t);
  const Eigen::Matrix2d& invjt = space.inv_jacobian_t(t);
  Eigen::Matrix2d gv = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 6; ++i) {
    const Eigen::Vector2d g = invjt * ref_grads[i];
    const double u0 = u.coeffs[space.udof(nodes[i], 0)];
    const double u1 = u.coeffs[space.udof(nodes[i], 1)];
    gv(0, 0) += g.x() * u0;
    gv(0, 1) += g.y() * u0;
    gv(1, 0) += g.x() * u1;
    gv(1, 1) += g.y() * u1;
  }
  return gv;
}

void require_velocity(const Field& u, const char* who) {
  if (u.role != FieldRole::Velocity || !u.space)
    throw std::invalid_argument(std::string(who) + ": velocity field required");
}

}  // namespace

Field stream_function(const Field& u, bool flip_sign) {
  require_velocity(u, "stream_function");
  const TaylorHoodSpace& space = *u.space;
  const auto rule = QuadratureRule::for_degree(5);

  SparseMatrix stiffness = p2_scalar_stiffness(space);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.num_scalar_nodes());
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const double jac2 = 2.0 * space.area(t);
    for (const auto& qp : rule.points()) {
      const Eigen::Matrix2d gv = velocity_gradient(space, u, t, p2::ref_gradients(qp.bary));
      const double curl = gv(1, 0) - gv(0, 1);  // -du1/dx2 + du2/dx1
      const auto n = p2::values(qp.bary);
      const double w = qp.weight * jac2 * (flip_sign ? -curl : curl);
      for (int i = 0; i < 6; ++i) rhs[nodes[i]] += w * n[i];
    }
  }

  // weak form of div grad psi = curl:  (grad psi, grad phi) = -(curl, phi)
  rhs = -rhs;

  // homogeneous Dirichlet on every boundary scalar node
  auto& vals = stiffness.values();
  const auto& offsets = stiffness.row_offsets();
  const auto& cols = stiffness.col_indices();
  for (int node = 0; node < space.num_scalar_nodes(); ++node) {
    if (!space.is_boundary_node(node)) continue;
    for (int k = offsets[node]; k < offsets[node + 1]; ++k)
      vals[k] = (cols[k] == node) ? 1.0 : 0.0;
    rhs[node] = 0.0;
  }

  Field psi = Field::zero(space, FieldRole::ScalarP2);
  psi.coeffs = factorize(stiffness).solve(rhs);
  return psi;
}

Field vorticity(const Field& u) {
  require_velocity(u, "vorticity");
  const TaylorHoodSpace& space = *u.space;
  const auto rule = QuadratureRule::for_degree(5);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.num_vertices());
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& tri = space.mesh().triangles[t];
    const double jac2 = 2.0 * space.area(t);
    for (const auto& qp : rule.points()) {
      const Eigen::Matrix2d gv = velocity_gradient(space, u, t, p2::ref_gradients(qp.bary));
      const double curl = gv(1, 0) - gv(0, 1);
      const double w = qp.weight * jac2 * curl;
      for (int j = 0; j < 3; ++j) rhs[tri[j]] += w * qp.bary[j];
    }
  }

  Field w = Field::zero(space, FieldRole::ScalarP1);
  w.coeffs = factorize(p1_mass(space)).solve(rhs);
  return w;
}

double divergence_norm(const Field& u) {
  require_velocity(u, "divergence_norm");
  const TaylorHoodSpace& space = *u.space;
  const auto rule = QuadratureRule::for_degree(5);
  double acc = 0.0;
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const double jac2 = 2.0 * space.area(t);
    for (const auto& qp : rule.points()) {
      const Eigen::Matrix2d gv = velocity_gradient(space, u, t, p2::ref_gradients(qp.bary));
      const double div = gv(0, 0) + gv(1, 1);
      acc += qp.weight * jac2 * div * div;
    }
  }
  return std::sqrt(acc);
}

ProbeSet ProbeSet::square_centerlines(int n) {
  if (n < 2) throw std::invalid_argument("centerline probes need n >= 2");
  ProbeSet set;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    set.probes.push_back({"x1=0.5", {0.5, t}});
  }
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    set.probes.push_back({"x2=0.5", {t, 0.5}});
  }
  return set;
}

ProbeSet ProbeSet::semi_ellipse_mid_depth() {
  ProbeSet set;
  set.probes.push_back({"left", {-0.5, -0.25}});
  set.probes.push_back({"center", {0.0, -0.25}});
  set.probes.push_back({"right", {0.5, -0.25}});
  return set;
}

std::string BranchSignature::pattern() const {
  std::string out;
  for (int i = 0; i < 3; ++i) out += signs[i] > 0 ? '+' : (signs[i] < 0 ? '-' : '0');
  return out;
}

BranchSignature branch_signature(const Field& psi, const ProbeSet& probes) {
  if (psi.role == FieldRole::Velocity)
    throw std::invalid_argument("branch_signature: scalar field required");
  if (probes.probes.size() < 3)
    throw std::invalid_argument("branch_signature: three probes required");
  constexpr double zero_tol = 1e-12;
  BranchSignature sig;
  for (int i = 0; i < 3; ++i) {
    const double v = psi.eval_scalar(probes.probes[i].point);
    sig.signs[i] = v > zero_tol ? 1 : (v < -zero_tol ? -1 : 0);
  }
  sig.psi_min = psi.coeffs.minCoeff();
  sig.psi_max = psi.coeffs.maxCoeff();
  return sig;
}

void export_vtk(const Mesh& mesh,
                const std::vector<std::pair<std::string, const Field*>>& fields,
                std::ostream& out) {
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  out << "# vtk DataFile Version 3.0\n";
  out << "cavityflow fields\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  for (const auto& v : mesh.vertices) out << g17(v.x()) << ' ' << g17(v.y()) << " 0\n";
  out << "CELLS " << nt << ' ' << 4 * nt << "\n";
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  out << "CELL_TYPES " << nt << "\n";
  for (int t = 0; t < nt; ++t) out << "5\n";

  if (fields.empty()) return;
  out << "POINT_DATA " << nv << "\n";
  for (const auto& [name, field] : fields) {
    if (!field->space || field->space->mesh().num_vertices() != nv)
      throw std::invalid_argument("export_vtk: field is not defined on this mesh");
    if (field->role == FieldRole::Velocity) {
      out << "VECTORS " << name << " double\n";
      for (int v = 0; v < nv; ++v)
        out << g17(field->coeffs[2 * v]) << ' ' << g17(field->coeffs[2 * v + 1]) << " 0\n";
    } else {
      // P2 fields down-sample to their vertex block; P1/pressure are
      // vertex-valued already
      out << "SCALARS " << name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (int v = 0; v < nv; ++v) out << g17(field->coeffs[v]) << "\n";
    }
  }
}

void export_vtk_file(const Mesh& mesh,
                     const std::vector<std::pair<std::string, const Field*>>& fields,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  export_vtk(mesh, fields, out);
  out.flush();
  if (!out) throw std::runtime_error("write failure: " + path);
}

std::string history_csv(const ConvergenceHistory& history) {
  std::ostringstream out;
  out << "k,eps\n";
  for (const auto& [k, eps] : epsilon(history)) out << k << ',' << g17(eps) << '\n';
  return out.str();
}

std::vector<ProfileSample> sample_profiles(const Field& u, int samples_per_line) {
  require_velocity(u, "sample_profiles");
  if (samples_per_line < 2) throw std::invalid_argument("samples_per_line must be >= 2");
  std::vector<ProfileSample> out;
  out.reserve(static_cast<size_t>(2) * samples_per_line);
  for (int i = 0; i < samples_per_line; ++i) {
    const double t = static_cast<double>(i) / (samples_per_line - 1);
    const Eigen::Vector2d p(0.5, t);
    out.push_back({"x1=0.5", t, p, u.eval_velocity(p)});
  }
  for (int i = 0; i < samples_per_line; ++i) {
    const double t = static_cast<double>(i) / (samples_per_line - 1);
    const Eigen::Vector2d p(t, 0.5);
    out.push_back({"x2=0.5", t, p, u.eval_velocity(p)});
  }
  return out;
}

std::string profiles_csv(const std::vector<ProfileSample>& samples) {
  std::ostringstream out;
  out << "line,param,x1,x2,u1,u2\n";
  for (const auto& s : samples)
    out << s.line << ',' << g17(s.param) << ',' << g17(s.point.x()) << ',' << g17(s.point.y())
        << ',' << g17(s.velocity.x()) << ',' << g17(s.velocity.y()) << '\n';
  return out.str();
}

}  // namespace cavityflow
