#ifndef CAVITYFLOW_LINSOLVE_HPP
#define CAVITYFLOW_LINSOLVE_HPP

#include <memory>
#include <stdexcept>

#include "cavityflow/sparse.hpp"

namespace cavityflow {

class SingularMatrixError : public std::runtime_error {
public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Opaque sparse LU factors of a SparseMatrix. Immutable and shareable;
/// concurrent solves against one factorization are permitted.
class Factorization {
public:
  Factorization() = default;
  bool valid() const { return impl_ != nullptr; }
  int dim() const;

  /// Back-substitution with iterative refinement; the result satisfies
  /// |Ax-b|_inf <= 1e-10 (|A|_inf |x|_inf + |b|_inf) on well-conditioned
  /// desk-scale systems.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  struct Impl;  // backend state, defined in linsolve.cpp

private:
  friend class DirectSolver;
  friend Factorization factorize(const SparseMatrix&);
  std::shared_ptr<const Impl> impl_;
};

/// LU factorization with partial pivoting and a fill-reducing ordering.
/// Throws SingularMatrixError on numerical singularity.
Factorization factorize(const SparseMatrix& matrix);

Eigen::VectorXd solve(const Factorization& fact, const Eigen::VectorXd& rhs);

/// Factorization driver that caches the symbolic analysis: refactorizing a
/// matrix with the identical sparsity pattern skips the ordering phase.
/// Used by the nonlinear iteration, where the pattern is fixed.
class DirectSolver {
public:
  DirectSolver();
  ~DirectSolver();
  DirectSolver(const DirectSolver&) = delete;
  DirectSolver& operator=(const DirectSolver&) = delete;

  void factorize(const SparseMatrix& matrix);
  const Factorization& factorization() const { return current_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return current_.solve(rhs); }

private:
  struct State;
  std::unique_ptr<State> state_;
  Factorization current_;
};

}  // namespace cavityflow

#endif
