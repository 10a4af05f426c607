#include "cavityflow/linsolve.hpp"

#include <cmath>

#ifdef CAVITYFLOW_HAVE_UMFPACK
#include <umfpack.h>
#else
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#endif

namespace cavityflow {

namespace {

[[maybe_unused]] double residual_inf(const SparseMatrix& a, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& b) {
  return (a.multiply(x) - b).lpNorm<Eigen::Infinity>();
}

[[maybe_unused]] double residual_bound(const SparseMatrix& a, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& b) {
  return 1e-10 * (a.max_abs_row_sum() * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
}

}  // namespace

#ifdef CAVITYFLOW_HAVE_UMFPACK

// The CSR arrays of A are handed to UMFPACK as the CSC form of A^T; solving
// with UMFPACK_At then solves the original system.
struct Factorization::Impl {
  SparseMatrix matrix;
  void* numeric = nullptr;
  ~Impl() {
    if (numeric) umfpack_di_free_numeric(&numeric);
  }
};

struct DirectSolver::State {
  void* symbolic = nullptr;
  std::vector<int> pattern_offsets, pattern_cols;
  ~State() {
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
  }
};

namespace {

// The assembled saddle-point systems have structurally symmetric coupling
// blocks; AMD on A+A^T keeps the fill an order of magnitude below the
// default unsymmetric ordering here.
void umfpack_control(double* control) {
  umfpack_di_defaults(control);
  control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
}

void* umfpack_symbolic_for(const SparseMatrix& m) {
  double control[UMFPACK_CONTROL];
  umfpack_control(control);
  void* symbolic = nullptr;
  const int status =
      umfpack_di_symbolic(m.dim(), m.dim(), m.row_offsets().data(), m.col_indices().data(),
                          m.values().data(), &symbolic, control, nullptr);
  if (status != UMFPACK_OK) {
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
    throw std::runtime_error("umfpack symbolic analysis failed, status " +
                             std::to_string(status));
  }
  return symbolic;
}

std::shared_ptr<const Factorization::Impl> umfpack_numeric_for(const SparseMatrix& m,
                                                               void* symbolic) {
  double control[UMFPACK_CONTROL];
  umfpack_control(control);
  auto impl = std::make_shared<Factorization::Impl>();
  impl->matrix = m;
  const int status = umfpack_di_numeric(impl->matrix.row_offsets().data(),
                                        impl->matrix.col_indices().data(),
                                        impl->matrix.values().data(), symbolic, &impl->numeric,
                                        control, nullptr);
  if (status == UMFPACK_WARNING_singular_matrix)
    throw SingularMatrixError("matrix is numerically singular");
  if (status != UMFPACK_OK)
    throw std::runtime_error("umfpack numeric factorization failed, status " +
                             std::to_string(status));
  return impl;
}

}  // namespace

int Factorization::dim() const { return impl_ ? impl_->matrix.dim() : 0; }

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
  if (!impl_) throw std::logic_error("solve on an empty factorization");
  const SparseMatrix& m = impl_->matrix;
  if (rhs.size() != m.dim()) throw std::invalid_argument("rhs length does not match dimension");
  double control[UMFPACK_CONTROL];
  umfpack_control(control);
  Eigen::VectorXd x(m.dim());
  // UMFPACK applies iterative refinement internally (IRSTEP)
  const int status =
      umfpack_di_solve(UMFPACK_At, m.row_offsets().data(), m.col_indices().data(),
                       m.values().data(), x.data(), rhs.data(), impl_->numeric, control, nullptr);
  if (status != UMFPACK_OK)
    throw std::runtime_error("umfpack solve failed, status " + std::to_string(status));
  return x;
}

Factorization factorize(const SparseMatrix& matrix) {
  void* symbolic = umfpack_symbolic_for(matrix);
  Factorization f;
  try {
    f.impl_ = umfpack_numeric_for(matrix, symbolic);
  } catch (...) {
    umfpack_di_free_symbolic(&symbolic);
    throw;
  }
  umfpack_di_free_symbolic(&symbolic);
  return f;
}

DirectSolver::DirectSolver() : state_(std::make_unique<State>()) {}
DirectSolver::~DirectSolver() = default;

void DirectSolver::factorize(const SparseMatrix& matrix) {
  if (!state_->symbolic || state_->pattern_offsets != matrix.row_offsets() ||
      state_->pattern_cols != matrix.col_indices()) {
    if (state_->symbolic) umfpack_di_free_symbolic(&state_->symbolic);
    state_->symbolic = nullptr;
    state_->symbolic = umfpack_symbolic_for(matrix);
    state_->pattern_offsets = matrix.row_offsets();
    state_->pattern_cols = matrix.col_indices();
  }
  Factorization f;
  f.impl_ = umfpack_numeric_for(matrix, state_->symbolic);
  current_ = std::move(f);
}

#else  // Eigen::SparseLU fallback

struct Factorization::Impl {
  SparseMatrix matrix;
  Eigen::SparseMatrix<double> eigen_matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

struct DirectSolver::State {};

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.nnz());
  for (int row = 0; row < m.dim(); ++row)
    for (int k = m.row_offsets()[row]; k < m.row_offsets()[row + 1]; ++k)
      trip.emplace_back(row, m.col_indices()[k], m.values()[k]);
  Eigen::SparseMatrix<double> out(m.dim(), m.dim());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

int Factorization::dim() const { return impl_ ? impl_->matrix.dim() : 0; }

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const {
  if (!impl_) throw std::logic_error("solve on an empty factorization");
  if (rhs.size() != impl_->matrix.dim())
    throw std::invalid_argument("rhs length does not match dimension");
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (residual_inf(impl_->matrix, x, rhs) > residual_bound(impl_->matrix, x, rhs)) {
    // one step of iterative refinement
    const Eigen::VectorXd r = rhs - impl_->matrix.multiply(x);
    x += impl_->lu.solve(r).eval();
  }
  return x;
}

Factorization factorize(const SparseMatrix& matrix) {
  auto impl = std::make_shared<Factorization::Impl>();
  impl->matrix = matrix;
  impl->eigen_matrix = to_eigen(matrix);
  impl->lu.compute(impl->eigen_matrix);
  if (impl->lu.info() != Eigen::Success)
    throw SingularMatrixError("matrix is numerically singular");
  Factorization f;
  f.impl_ = std::move(impl);
  return f;
}

DirectSolver::DirectSolver() : state_(std::make_unique<State>()) {}
DirectSolver::~DirectSolver() = default;

void DirectSolver::factorize(const SparseMatrix& matrix) { current_ = cavityflow::factorize(matrix); }

#endif

Eigen::VectorXd solve(const Factorization& fact, const Eigen::VectorXd& rhs) {
  return fact.solve(rhs);
}

}  // namespace cavityflow
