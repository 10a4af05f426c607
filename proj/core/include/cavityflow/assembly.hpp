#ifndef CAVITYFLOW_ASSEMBLY_HPP
#define CAVITYFLOW_ASSEMBLY_HPP

#include <map>
#include <optional>

#include "cavityflow/sparse.hpp"
#include "cavityflow/spaces.hpp"

namespace cavityflow {

/// Algebraic writing of the convective operator C(v, u), evaluated strongly
/// per element:
///   Conservative   (v.grad)u + (div v) u     = div(v (x) u)
///   Characteristic (v.grad)u
///   SkewSymmetric  (v.grad)u + (div v) u / 2  (energy neutral in L2)
enum class ConvectionForm { Conservative, Characteristic, SkewSymmetric };

/// Linearization of C(u,u) around the previous iterate u_k; in C(v, u) the
/// first argument advects and the second is transported.
///   Method1  unknown advector:   C(u, u_k), the transported field frozen
///   Method2  frozen advector:    C(u_k, u), Picard-style transport by u_k
///   Method3  half-sum of Method1 and Method2
///   Newton   C(u_k, u) + C(u, u_k) with rhs correction +C(u_k, u_k)
/// Method2 is the robust large-basin iteration; Method1 tends to diverge
/// even with strong relaxation. Newton is invariant under the labeling.
enum class Linearization { Method1, Method2, Method3, Newton };

/// Monolithic linearized system over [velocity DOFs | pressure DOFs | gauge
/// multiplier]; dimension n_u + n_p + 1.
struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  int n_u = 0;
  int n_p = 0;

  int dim() const { return n_u + n_p + 1; }
  int gauge_index() const { return n_u + n_p; }
};

/// Prescribed velocity, one function per boundary tag.
using BoundaryConditions = std::map<int, VectorFunc>;

/// Lid-driven cavity data: (1,0) on the lid tag, no-slip elsewhere.
BoundaryConditions lid_cavity_bc(double lid_speed = 1.0);

/// Vector Laplacian block  (grad u, grad v)  over velocity DOFs, assembled
/// without the 1/Re factor (applied at system-build time).
SparseMatrix assemble_viscous(const TaylorHoodSpace& space);

struct PressureDivergenceBlocks {
  SparseMatrix grad_p;  // velocity rows:  -(p, div v)
  SparseMatrix div;     // pressure rows:  (q, div u);  grad_p = -div^T
};
PressureDivergenceBlocks assemble_pressure_divergence(const TaylorHoodSpace& space);

struct ConvectionBlocks {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;  // nonzero only for Newton: +(C(u_k,u_k), v)
};
ConvectionBlocks assemble_convection(const TaylorHoodSpace& space, ConvectionForm form,
                                     Linearization lin, const Field& u_k);

/// Load vector  (f, v)  over velocity rows (degree-9 quadrature).
Eigen::VectorXd assemble_forcing(const TaylorHoodSpace& space, const VectorFunc& f);

/// P1 lumped weights w with  w . p = integral of p  (exact for P1).
Eigen::VectorXd pressure_gauge_weights(const TaylorHoodSpace& space);

/// matrix = viscous/Re + convection + grad_p + div;  rhs = convection rhs
/// (+ forcing when given). Gauge and Dirichlet rows are applied afterwards.
LinearSystem compose_system(const TaylorHoodSpace& space, double reynolds,
                            const SparseMatrix& viscous, const PressureDivergenceBlocks& pd,
                            const ConvectionBlocks& convection,
                            const Eigen::VectorXd* forcing = nullptr);

/// Appends the zero-mean pressure constraint as a Lagrange-multiplier
/// row/column of lumped P1 weights.
void apply_pressure_gauge(LinearSystem& system, const TaylorHoodSpace& space);

/// Replaces each constrained velocity row by an identity row with the
/// prescribed value (columns are kept). Edge-midpoint DOFs take g at the
/// midpoint. Throws std::invalid_argument when a boundary tag present in
/// the space has no entry in bc.
void apply_dirichlet(LinearSystem& system, const TaylorHoodSpace& space,
                     const BoundaryConditions& bc);

/// Dirichlet values as a (dof index, value) list in increasing dof order.
std::vector<std::pair<int, double>> dirichlet_values(const TaylorHoodSpace& space,
                                                     const BoundaryConditions& bc);

}  // namespace cavityflow

#endif
