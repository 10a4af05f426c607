#include "cavityflow/nonlinear.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavityflow {

void SolverConfig::validate() const {
  if (!(reynolds > 0.0)) throw std::invalid_argument("reynolds must be positive");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must be in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(divergence_threshold > 0.0))
    throw std::invalid_argument("divergence_threshold must be positive");
}

SolutionState SolutionState::zero(const TaylorHoodSpace& space) {
  return {Field::zero(space, FieldRole::Velocity), Field::zero(space, FieldRole::Pressure)};
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::MaxIterReached: return "max_iter";
  }
  return "unknown";
}

std::vector<std::pair<int, double>> epsilon(const ConvergenceHistory& history) {
  std::vector<std::pair<int, double>> out;
  out.reserve(history.epsilons.size());
  for (size_t k = 0; k < history.epsilons.size(); ++k)
    out.emplace_back(static_cast<int>(k) + 1, history.epsilons[k]);
  return out;
}

namespace {

// Per-space assembly cache and pattern-reusing LU shared across the
// iterations of one solve. The viscous and pressure blocks do not depend
// on the iterate; only convection is reassembled.
class StationaryIterator {
public:
  StationaryIterator(const TaylorHoodSpace& space, const BoundaryConditions& bc,
                     const Eigen::VectorXd* forcing)
      : space_(space),
        bc_(bc),
        forcing_(forcing),
        viscous_(assemble_viscous(space)),
        pressure_div_(assemble_pressure_divergence(space)),
        dirichlet_(dirichlet_values(space, bc)) {}

  void impose_bc(SolutionState& state) const {
    for (const auto& [dof, g] : dirichlet_) state.u.coeffs[dof] = g;
  }

  SolutionState step(const SolutionState& state_k, const SolverConfig& config) {
    const ConvectionBlocks conv =
        assemble_convection(space_, config.form, config.method, state_k.u);
    LinearSystem sys = compose_system(space_, config.reynolds, viscous_, pressure_div_, conv,
                                      forcing_);
    apply_pressure_gauge(sys, space_);
    apply_dirichlet(sys, space_, bc_);

    lu_.factorize(sys.matrix);
    const Eigen::VectorXd aux = lu_.solve(sys.rhs);

    SolutionState next = SolutionState::zero(space_);
    const double sigma = config.sigma;
    next.u.coeffs = sigma * aux.head(sys.n_u) + (1.0 - sigma) * state_k.u.coeffs;
    next.p.coeffs = sigma * aux.segment(sys.n_u, sys.n_p) + (1.0 - sigma) * state_k.p.coeffs;
    impose_bc(next);  // keep constrained DOFs exact under the blend
    return next;
  }

private:
  const TaylorHoodSpace& space_;
  const BoundaryConditions& bc_;
  const Eigen::VectorXd* forcing_;
  SparseMatrix viscous_;
  PressureDivergenceBlocks pressure_div_;
  std::vector<std::pair<int, double>> dirichlet_;
  DirectSolver lu_;
};

std::pair<SolutionState, ConvergenceHistory> run_iterations(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc,
    const SolutionState& initial, const Eigen::VectorXd* forcing, int iterations,
    bool stop_on_tol) {
  config.validate();
  StationaryIterator iter(space, bc, forcing);

  SolutionState state = initial;
  iter.impose_bc(state);

  ConvergenceHistory history;
  for (int k = 0; k < iterations; ++k) {
    SolutionState next = SolutionState::zero(space);
    try {
      next = iter.step(state, config);
    } catch (const SingularMatrixError&) {
      // singular linearized system: report as divergence
      history.epsilons.push_back(std::numeric_limits<double>::infinity());
      history.status = SolveStatus::Diverged;
      return {std::move(state), std::move(history)};
    }
    const double eps = l2_diff(next.u, state.u);
    history.epsilons.push_back(eps);
    state = std::move(next);

    if (!std::isfinite(eps) || eps > config.divergence_threshold) {
      history.status = SolveStatus::Diverged;
      return {std::move(state), std::move(history)};
    }
    if (stop_on_tol && eps <= config.tol) {
      history.status = SolveStatus::Converged;
      return {std::move(state), std::move(history)};
    }
  }
  if (!stop_on_tol && !history.epsilons.empty() && history.epsilons.back() <= config.tol)
    history.status = SolveStatus::Converged;
  else
    history.status = SolveStatus::MaxIterReached;
  return {std::move(state), std::move(history)};
}

}  // namespace

SolutionState iterate_once(const SolutionState& state_k, const SolverConfig& config,
                           const BoundaryConditions& bc, const Eigen::VectorXd* forcing) {
  config.validate();
  if (!state_k.u.space || state_k.u.space != state_k.p.space)
    throw std::invalid_argument("state fields must share a space");
  StationaryIterator iter(*state_k.u.space, bc, forcing);
  SolutionState state = state_k;
  iter.impose_bc(state);
  return iter.step(state, config);
}

std::pair<SolutionState, ConvergenceHistory> solve_stationary(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc,
    const SolutionState& initial, const Eigen::VectorXd* forcing) {
  return run_iterations(config, space, bc, initial, forcing, config.max_iter, true);
}

std::pair<SolutionState, ConvergenceHistory> solve_stationary(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc) {
  return solve_stationary(config, space, bc, SolutionState::zero(space));
}

std::pair<SolutionState, ConvergenceHistory> solve_fixed_iterations(
    const SolverConfig& config, const TaylorHoodSpace& space, const BoundaryConditions& bc,
    const SolutionState& initial, int iterations, const Eigen::VectorXd* forcing) {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  return run_iterations(config, space, bc, initial, forcing, iterations, false);
}

}  // namespace cavityflow
