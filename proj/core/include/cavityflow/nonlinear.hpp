#ifndef CAVITYFLOW_NONLINEAR_HPP
#define CAVITYFLOW_NONLINEAR_HPP

#include <utility>
#include <vector>

#include "cavityflow/assembly.hpp"
#include "cavityflow/linsolve.hpp"

namespace cavityflow {

struct SolverConfig {
  double reynolds = 100.0;
  ConvectionForm form = ConvectionForm::Conservative;
  Linearization method = Linearization::Newton;
  double sigma = 1.0;  // relaxation parameter in (0, 1]
  double tol = 1e-8;
  int max_iter = 100;
  double divergence_threshold = 1e6;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct SolutionState {
  Field u;
  Field p;

  static SolutionState zero(const TaylorHoodSpace& space);
};

enum class SolveStatus { Converged, Diverged, MaxIterReached };

const char* to_string(SolveStatus status);

/// eps(k) = |u^k - u^(k-1)| in L2, k = 1, 2, ...
struct ConvergenceHistory {
  std::vector<double> epsilons;
  SolveStatus status = SolveStatus::MaxIterReached;

  int iterations() const { return static_cast<int>(epsilons.size()); }
};

/// The recorded (k, eps(k)) sequence.
std::vector<std::pair<int, double>> epsilon(const ConvergenceHistory& history);

/// One two-level iteration: assembles the system linearized at state_k
/// (viscous/Re + pressure coupling + convection per method and form + gauge
/// + Dirichlet rows), solves it for the auxiliary pair, and returns the
/// sigma-blend of auxiliary and previous state applied to both u and p.
/// Propagates SingularMatrixError on a singular linearized system.
SolutionState iterate_once(const SolutionState& state_k, const SolverConfig& config,
                           const BoundaryConditions& bc,
                           const Eigen::VectorXd* forcing = nullptr);

/// Runs iterate_once from `initial` (Dirichlet DOFs overwritten with g
/// first) until eps <= tol (Converged), eps > divergence_threshold or
/// non-finite (Diverged), or max_iter (MaxIterReached).
std::pair<SolutionState, ConvergenceHistory> solve_stationary(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc,
    const SolutionState& initial, const Eigen::VectorXd* forcing = nullptr);

/// Zero-start convenience overload.
std::pair<SolutionState, ConvergenceHistory> solve_stationary(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc);

/// Fixed-iteration variant: runs exactly `iterations` steps (stopping early
/// only on divergence) and reports Converged iff the final eps <= tol.
std::pair<SolutionState, ConvergenceHistory> solve_fixed_iterations(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc,
    const SolutionState& initial, int iterations, const Eigen::VectorXd* forcing = nullptr);

}  // namespace cavityflow

#endif
