#include "cavityflow/continuation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cavityflow {

void ContinuationConfig::validate() const {
  if (!(re_start > 0.0)) throw std::invalid_argument("re_start must be positive");
  if (!(delta_start > 0.0)) throw std::invalid_argument("delta_start must be positive");
  if (!(re_target >= re_start)) throw std::invalid_argument("re_target must be >= re_start");
  if (!(delta_min > 0.0)) throw std::invalid_argument("delta_min must be positive");
  if (step_iteration_cap < 1) throw std::invalid_argument("step_iteration_cap must be >= 1");
  if (total_iteration_budget < 0)
    throw std::invalid_argument("total_iteration_budget must be nonnegative");
  per_step.validate();
}

int ContinuationTrace::total_iterations() const {
  int total = 0;
  for (const auto& s : steps) total += s.iterations_used;
  return total;
}

bool ContinuationTrace::reached_target(double re_target) const {
  return last_converged_re && *last_converged_re >= re_target;
}

TrialSolver make_trial_solver(const ContinuationConfig& cfg, const TaylorHoodSpace& space,
                              const BoundaryConditions& bc) {
  return [&cfg, &space, &bc](double reynolds, const SolutionState& warm) {
    SolverConfig sc = cfg.per_step;
    sc.reynolds = reynolds;
    TrialResult result;
    if (cfg.step_mode == StepMode::FixedIterations) {
      auto [state, history] =
          solve_fixed_iterations(sc, space, bc, warm, cfg.step_iteration_cap);
      result = {history.status, history.iterations(),
                history.epsilons.empty() ? 0.0 : history.epsilons.back(), std::move(state)};
    } else {
      sc.max_iter = cfg.step_iteration_cap;
      auto [state, history] = solve_stationary(sc, space, bc, warm);
      result = {history.status, history.iterations(),
                history.epsilons.empty() ? 0.0 : history.epsilons.back(), std::move(state)};
    }
    return result;
  };
}

namespace {

void record(ContinuationTrace& trace, double re, double delta, const TrialResult& r) {
  trace.steps.push_back({re, delta, r.status, r.iterations, r.eps_final});
  if (r.status == SolveStatus::Converged) {
    trace.last_converged_re = re;
    trace.last_converged_state = r.state;
  }
}

}  // namespace

ContinuationTrace continue_sequential(const ContinuationConfig& cfg, const SolutionState& initial,
                                      const TrialSolver& trial,
                                      const std::vector<double>& schedule) {
  cfg.validate();
  for (size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1]))
      throw std::invalid_argument("schedule must be strictly increasing");

  ContinuationTrace trace;
  const SolutionState* warm = &initial;
  double prev_re = 0.0;
  int spent = 0;
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (spent >= cfg.total_iteration_budget) break;
    const TrialResult r = trial(schedule[i], *warm);
    spent += r.iterations;
    record(trace, schedule[i], i == 0 ? 0.0 : schedule[i] - prev_re, r);
    if (r.status != SolveStatus::Converged) break;
    warm = &*trace.last_converged_state;
    prev_re = schedule[i];
  }
  return trace;
}

ContinuationTrace continue_bisection(const ContinuationConfig& cfg, const SolutionState& initial,
                                     const TrialSolver& trial) {
  cfg.validate();
  ContinuationTrace trace;
  int spent = 0;

  // base solve at re_start
  if (spent >= cfg.total_iteration_budget) return trace;
  {
    const TrialResult r = trial(cfg.re_start, initial);
    spent += r.iterations;
    record(trace, cfg.re_start, 0.0, r);
    if (r.status != SolveStatus::Converged) {
      trace.critical_re_estimate = trace.last_converged_re;  // stays empty
      return trace;
    }
  }

  double re_cur = cfg.re_start;
  double delta = cfg.delta_start;
  while (re_cur < cfg.re_target && delta >= cfg.delta_min &&
         spent < cfg.total_iteration_budget) {
    const double trial_re = std::min(re_cur + delta, cfg.re_target);
    const TrialResult r = trial(trial_re, *trace.last_converged_state);
    spent += r.iterations;
    record(trace, trial_re, trial_re - re_cur, r);
    if (r.status == SolveStatus::Converged) {
      re_cur = trial_re;  // keep delta unchanged
    } else {
      delta *= 0.5;  // halve the increment, retry from the Re_n solution
    }
  }
  if (re_cur < cfg.re_target) trace.critical_re_estimate = re_cur;
  return trace;
}

ContinuationTrace continue_sequential(const ContinuationConfig& cfg, const TaylorHoodSpace& space,
                                      const BoundaryConditions& bc,
                                      const std::vector<double>& schedule) {
  return continue_sequential(cfg, SolutionState::zero(space), make_trial_solver(cfg, space, bc),
                             schedule);
}

ContinuationTrace continue_bisection(const ContinuationConfig& cfg, const TaylorHoodSpace& space,
                                     const BoundaryConditions& bc) {
  return continue_bisection(cfg, SolutionState::zero(space), make_trial_solver(cfg, space, bc));
}

std::string trace_csv(const ContinuationTrace& trace) {
  std::ostringstream out;
  out << "step,Re,delta,status,iterations,eps_final\n";
  char buf[64];
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    out << i << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", s.reynolds);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", s.delta);
    out << buf << ',' << to_string(s.status) << ',' << s.iterations_used << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", s.eps_final);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace cavityflow
