#ifndef CAVITYFLOW_CONTINUATION_HPP
#define CAVITYFLOW_CONTINUATION_HPP

#include <functional>
#include <optional>
#include <string>

#include "cavityflow/nonlinear.hpp"

namespace cavityflow {

/// Per-trial solver mode: FixedIterations runs exactly step_iteration_cap
/// iterations and declares success iff the final eps <= tol; ToleranceExit
/// stops at the first eps <= tol.
enum class StepMode { FixedIterations, ToleranceExit };

struct ContinuationConfig {
  double re_start = 500.0;
  double delta_start = 2000.0;
  double re_target = 1e9;  // effectively "run until the method gives out"
  SolverConfig per_step;   // reynolds is overwritten per trial
  int step_iteration_cap = 10;
  int total_iteration_budget = 500;
  double delta_min = 1.0;
  StepMode step_mode = StepMode::FixedIterations;

  void validate() const;
};

struct ContinuationStep {
  double reynolds = 0.0;
  double delta = 0.0;  // increment that produced this trial (0 for the base step)
  SolveStatus status = SolveStatus::MaxIterReached;
  int iterations_used = 0;
  double eps_final = 0.0;
};

struct ContinuationTrace {
  std::vector<ContinuationStep> steps;
  std::optional<double> last_converged_re;
  std::optional<SolutionState> last_converged_state;
  std::optional<double> critical_re_estimate;  // absent when re_target was reached

  int total_iterations() const;
  bool reached_target(double re_target) const;
};

struct TrialResult {
  SolveStatus status = SolveStatus::MaxIterReached;
  int iterations = 0;
  double eps_final = 0.0;
  SolutionState state;
};

/// A trial solve at a given Reynolds number from a warm-start state.
/// Injected so the bisection recurrence is testable against stub oracles.
using TrialSolver = std::function<TrialResult(double reynolds, const SolutionState& warm_start)>;

/// Solves at each scheduled Re (strictly increasing), warm-starting from the
/// previous converged state; stops at the first failure or when the budget
/// is exhausted.
ContinuationTrace continue_sequential(const ContinuationConfig& cfg, const TaylorHoodSpace& space,
                                      const BoundaryConditions& bc,
                                      const std::vector<double>& schedule);

/// Bisection refinement of the Reynolds increment: trialRe_{n+1} = Re_n +
/// delta_n; success keeps delta and advances, failure halves delta and
/// retries from the Re_n solution. Terminates on budget exhaustion, delta <
/// delta_min, or reaching re_target; the critical-Re estimate is the largest
/// converged Re when the target was not reached.
ContinuationTrace continue_bisection(const ContinuationConfig& cfg, const TaylorHoodSpace& space,
                                     const BoundaryConditions& bc);

/// Core recurrences over an injected trial solver (used by tests).
ContinuationTrace continue_sequential(const ContinuationConfig& cfg, const SolutionState& initial,
                                      const TrialSolver& trial, const std::vector<double>& schedule);
ContinuationTrace continue_bisection(const ContinuationConfig& cfg, const SolutionState& initial,
                                     const TrialSolver& trial);

/// Default trial solver over the nonlinear module per cfg.step_mode.
TrialSolver make_trial_solver(const ContinuationConfig& cfg, const TaylorHoodSpace& space,
                              const BoundaryConditions& bc);

/// CSV with header `step,Re,delta,status,iterations,eps_final`.
std::string trace_csv(const ContinuationTrace& trace);

}  // namespace cavityflow

#endif
