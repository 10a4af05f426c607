#include "cavityflow/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace cavityflow {

namespace {

struct RefTables {
  QuadratureRule rule;
  std::vector<std::array<double, 6>> n;                 // P2 values per qpoint
  std::vector<std::array<Eigen::Vector2d, 6>> dn_ref;   // P2 reference gradients
  explicit RefTables(int degree) : rule(QuadratureRule::for_degree(degree)) {
    for (const auto& qp : rule.points()) {
      n.push_back(p2::values(qp.bary));
      dn_ref.push_back(p2::ref_gradients(qp.bary));
    }
  }
};

const RefTables& volume_tables() {
  static const RefTables tables(5);
  return tables;
}

double form_beta(ConvectionForm form) {
  switch (form) {
    case ConvectionForm::Conservative: return 1.0;
    case ConvectionForm::Characteristic: return 0.0;
    case ConvectionForm::SkewSymmetric: return 0.5;
  }
  return 0.0;
}

}  // namespace

BoundaryConditions lid_cavity_bc(double lid_speed) {
  BoundaryConditions bc;
  bc[kLidTag] = [lid_speed](const Eigen::Vector2d&) { return Eigen::Vector2d(lid_speed, 0.0); };
  bc[kWallTag] = [](const Eigen::Vector2d&) { return Eigen::Vector2d::Zero(); };
  return bc;
}

SparseMatrix assemble_viscous(const TaylorHoodSpace& space) {
  const auto& tab = volume_tables();
  const int n = 2 * space.num_scalar_nodes() + space.n_p() + 1;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(space.mesh().num_triangles()) * 72);

  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const Eigen::Matrix2d& invjt = space.inv_jacobian_t(t);
    const double jac2 = 2.0 * space.area(t);

    double k_el[6][6] = {};
    for (size_t q = 0; q < tab.rule.points().size(); ++q) {
      const double w = tab.rule.points()[q].weight * jac2;
      Eigen::Vector2d g[6];
      for (int i = 0; i < 6; ++i) g[i] = invjt * tab.dn_ref[q][i];
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) k_el[i][j] += w * g[i].dot(g[j]);
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          trip.push_back({space.udof(nodes[i], c), space.udof(nodes[j], c), k_el[i][j]});
  }
  return SparseMatrix::from_triplets(n, std::move(trip));
}

PressureDivergenceBlocks assemble_pressure_divergence(const TaylorHoodSpace& space) {
  const auto& tab = volume_tables();
  const int n_u = space.n_u();
  const int n = n_u + space.n_p() + 1;
  std::vector<Triplet> trip_g, trip_d;
  trip_g.reserve(static_cast<size_t>(space.mesh().num_triangles()) * 36);
  trip_d.reserve(trip_g.capacity());

  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const auto& tri = space.mesh().triangles[t];
    const Eigen::Matrix2d& invjt = space.inv_jacobian_t(t);
    const double jac2 = 2.0 * space.area(t);

    // b_el[i][c][j] = integral of psi_j * dN_i/dx_c
    double b_el[6][2][3] = {};
    for (size_t q = 0; q < tab.rule.points().size(); ++q) {
      const auto& qp = tab.rule.points()[q];
      const double w = qp.weight * jac2;
      for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d g = invjt * tab.dn_ref[q][i];
        for (int j = 0; j < 3; ++j) {
          const double pj = qp.bary[j];
          b_el[i][0][j] += w * g.x() * pj;
          b_el[i][1][j] += w * g.y() * pj;
        }
      }
    }
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 2; ++c)
        for (int j = 0; j < 3; ++j) {
          const int urow = space.udof(nodes[i], c);
          const int pcol = n_u + tri[j];
          trip_g.push_back({urow, pcol, -b_el[i][c][j]});
          trip_d.push_back({pcol, urow, b_el[i][c][j]});
        }
  }
  return {SparseMatrix::from_triplets(n, std::move(trip_g)),
          SparseMatrix::from_triplets(n, std::move(trip_d))};
}

ConvectionBlocks assemble_convection(const TaylorHoodSpace& space, ConvectionForm form,
                                     Linearization lin, const Field& u_k) {
  if (u_k.role != FieldRole::Velocity || u_k.space != &space)
    throw std::invalid_argument("assemble_convection: u_k must be a velocity field on the space");
  const auto& tab = volume_tables();
  const int n = space.n_u() + space.n_p() + 1;
  const double beta = form_beta(form);

  // w_adv weights C(u_k, u) (advector frozen), w_tr weights C(u, u_k)
  // (transported field frozen); Method3 is the half-sum
  double w_adv = 0.0, w_tr = 0.0;
  bool newton_rhs = false;
  switch (lin) {
    case Linearization::Method1: w_tr = 1.0; break;
    case Linearization::Method2: w_adv = 1.0; break;
    case Linearization::Method3: w_adv = 0.5; w_tr = 0.5; break;
    case Linearization::Newton: w_adv = 1.0; w_tr = 1.0; newton_rhs = true; break;
  }

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(space.mesh().num_triangles()) * 144);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const Eigen::Matrix2d& invjt = space.inv_jacobian_t(t);
    const double jac2 = 2.0 * space.area(t);

    double uloc[6][2];
    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 2; ++c) uloc[i][c] = u_k.coeffs[space.udof(nodes[i], c)];

    double m_el[12][12] = {};
    double r_el[12] = {};
    for (size_t q = 0; q < tab.rule.points().size(); ++q) {
      const double w = tab.rule.points()[q].weight * jac2;
      const auto& nq = tab.n[q];
      Eigen::Vector2d g[6];
      for (int i = 0; i < 6; ++i) g[i] = invjt * tab.dn_ref[q][i];

      Eigen::Vector2d v = Eigen::Vector2d::Zero();   // u_k at the qpoint
      Eigen::Matrix2d gv = Eigen::Matrix2d::Zero();  // gv(c,d) = d(u_k)_c / dx_d
      for (int i = 0; i < 6; ++i) {
        v.x() += nq[i] * uloc[i][0];
        v.y() += nq[i] * uloc[i][1];
        gv(0, 0) += g[i].x() * uloc[i][0];
        gv(0, 1) += g[i].y() * uloc[i][0];
        gv(1, 0) += g[i].x() * uloc[i][1];
        gv(1, 1) += g[i].y() * uloc[i][1];
      }
      const double divv = gv(0, 0) + gv(1, 1);

      if (w_adv != 0.0) {
        // C(u_k, u): component-diagonal rows  (u_k.grad N_j + beta div u_k N_j) N_i
        for (int j = 0; j < 6; ++j) {
          const double a = w_adv * (v.dot(g[j]) + beta * divv * nq[j]);
          for (int i = 0; i < 6; ++i) {
            const double val = w * a * nq[i];
            m_el[2 * i][2 * j] += val;
            m_el[2 * i + 1][2 * j + 1] += val;
          }
        }
      }
      if (w_tr != 0.0) {
        // C(u, u_k): full component coupling  (N_j du_k_c/dx_d + beta dN_j/dx_d u_k_c) N_i
        for (int j = 0; j < 6; ++j) {
          for (int d = 0; d < 2; ++d) {
            const double a0 = w_tr * (nq[j] * gv(0, d) + beta * g[j][d] * v.x());
            const double a1 = w_tr * (nq[j] * gv(1, d) + beta * g[j][d] * v.y());
            for (int i = 0; i < 6; ++i) {
              m_el[2 * i][2 * j + d] += w * a0 * nq[i];
              m_el[2 * i + 1][2 * j + d] += w * a1 * nq[i];
            }
          }
        }
      }
      if (newton_rhs) {
        const Eigen::Vector2d conv = gv * v + beta * divv * v;  // C(u_k, u_k)
        for (int i = 0; i < 6; ++i) {
          r_el[2 * i] += w * conv.x() * nq[i];
          r_el[2 * i + 1] += w * conv.y() * nq[i];
        }
      }
    }

    for (int i = 0; i < 6; ++i)
      for (int c = 0; c < 2; ++c) {
        const int row = space.udof(nodes[i], c);
        for (int j = 0; j < 6; ++j)
          for (int d = 0; d < 2; ++d)
            trip.push_back({row, space.udof(nodes[j], d), m_el[2 * i + c][2 * j + d]});
        if (newton_rhs) rhs[row] += r_el[2 * i + c];
      }
  }
  return {SparseMatrix::from_triplets(n, std::move(trip)), std::move(rhs)};
}

Eigen::VectorXd assemble_forcing(const TaylorHoodSpace& space, const VectorFunc& f) {
  static const RefTables tab(9);
  const int n = space.n_u() + space.n_p() + 1;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const auto& nodes = space.scalar_nodes(t);
    const auto& tri = space.mesh().triangles[t];
    const Eigen::Vector2d& x0 = space.mesh().vertices[tri[0]];
    const Eigen::Vector2d& x1 = space.mesh().vertices[tri[1]];
    const Eigen::Vector2d& x2 = space.mesh().vertices[tri[2]];
    const double jac2 = 2.0 * space.area(t);

    for (size_t q = 0; q < tab.rule.points().size(); ++q) {
      const auto& qp = tab.rule.points()[q];
      const Eigen::Vector2d x = qp.bary[0] * x0 + qp.bary[1] * x1 + qp.bary[2] * x2;
      const Eigen::Vector2d fv = f(x);
      const double w = qp.weight * jac2;
      for (int i = 0; i < 6; ++i) {
        rhs[space.udof(nodes[i], 0)] += w * fv.x() * tab.n[q][i];
        rhs[space.udof(nodes[i], 1)] += w * fv.y() * tab.n[q][i];
      }
    }
  }
  return rhs;
}

Eigen::VectorXd pressure_gauge_weights(const TaylorHoodSpace& space) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(space.n_p());
  for (int t = 0; t < space.mesh().num_triangles(); ++t) {
    const double third = space.area(t) / 3.0;
    for (int v : space.mesh().triangles[t]) w[v] += third;
  }
  return w;
}

LinearSystem compose_system(const TaylorHoodSpace& space, double reynolds,
                            const SparseMatrix& viscous, const PressureDivergenceBlocks& pd,
                            const ConvectionBlocks& convection, const Eigen::VectorXd* forcing) {
  if (reynolds <= 0.0) throw std::invalid_argument("Reynolds number must be positive");
  LinearSystem sys;
  sys.n_u = space.n_u();
  sys.n_p = space.n_p();
  sys.matrix = SparseMatrix::scaled_sum({{&viscous, 1.0 / reynolds},
                                         {&convection.matrix, 1.0},
                                         {&pd.grad_p, 1.0},
                                         {&pd.div, 1.0}});
  sys.rhs = convection.rhs;
  if (sys.rhs.size() == 0) sys.rhs = Eigen::VectorXd::Zero(sys.dim());
  if (forcing) sys.rhs += *forcing;
  return sys;
}

void apply_pressure_gauge(LinearSystem& system, const TaylorHoodSpace& space) {
  const Eigen::VectorXd w = pressure_gauge_weights(space);
  const int gauge = system.gauge_index();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(2) * space.n_p());
  for (int j = 0; j < space.n_p(); ++j) {
    trip.push_back({gauge, system.n_u + j, w[j]});
    trip.push_back({system.n_u + j, gauge, w[j]});
  }
  const SparseMatrix gauge_block = SparseMatrix::from_triplets(system.dim(), std::move(trip));
  system.matrix = SparseMatrix::scaled_sum({{&system.matrix, 1.0}, {&gauge_block, 1.0}});
}

std::vector<std::pair<int, double>> dirichlet_values(const TaylorHoodSpace& space,
                                                     const BoundaryConditions& bc) {
  for (int tag : space.boundary_tags_present())
    if (bc.find(tag) == bc.end())
      throw std::invalid_argument("missing boundary condition for tag " + std::to_string(tag));

  std::vector<std::pair<int, double>> values;
  for (int node = 0; node < space.num_scalar_nodes(); ++node) {
    const int tag = space.node_tag(node);
    if (tag == 0) continue;
    const Eigen::Vector2d g = bc.at(tag)(space.node_position(node));
    values.emplace_back(space.udof(node, 0), g.x());
    values.emplace_back(space.udof(node, 1), g.y());
  }
  return values;
}

void apply_dirichlet(LinearSystem& system, const TaylorHoodSpace& space,
                     const BoundaryConditions& bc) {
  const auto values = dirichlet_values(space, bc);
  auto& vals = system.matrix.values();
  const auto& offsets = system.matrix.row_offsets();
  const auto& cols = system.matrix.col_indices();
  for (const auto& [dof, g] : values) {
    bool diag_found = false;
    for (int k = offsets[dof]; k < offsets[dof + 1]; ++k) {
      if (cols[k] == dof) {
        vals[k] = 1.0;
        diag_found = true;
      } else {
        vals[k] = 0.0;
      }
    }
    if (!diag_found) throw std::logic_error("constrained row lacks a stored diagonal");
    system.rhs[dof] = g;
  }
}

}  // namespace cavityflow
