#include "cavityflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavityflow {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("triplet index out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.n_ = n;
  m.row_offsets_.assign(n + 1, 0);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  size_t k = 0;
  for (int row = 0; row < n; ++row) {
    m.row_offsets_[row] = static_cast<int>(m.values_.size());
    while (k < triplets.size() && triplets[k].row == row) {
      const int col = triplets[k].col;
      double v = 0.0;
      while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col)
        v += triplets[k++].value;
      m.col_indices_.push_back(col);
      m.values_.push_back(v);
    }
  }
  m.row_offsets_[n] = static_cast<int>(m.values_.size());
  return m;
}

double SparseMatrix::coeff(int row, int col) const {
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[it - col_indices_.begin()];
}

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("matvec dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int row = 0; row < n_; ++row) {
    double acc = 0.0;
    for (int k = row_offsets_[row]; k < row_offsets_[row + 1]; ++k)
      acc += values_[k] * x[col_indices_[k]];
    y[row] = acc;
  }
  return y;
}

double SparseMatrix::max_abs_row_sum() const {
  double best = 0.0;
  for (int row = 0; row < n_; ++row) {
    double acc = 0.0;
    for (int k = row_offsets_[row]; k < row_offsets_[row + 1]; ++k) acc += std::abs(values_[k]);
    best = std::max(best, acc);
  }
  return best;
}

SparseMatrix SparseMatrix::scaled_sum(
    const std::vector<std::pair<const SparseMatrix*, double>>& terms) {
  if (terms.empty()) throw std::invalid_argument("scaled_sum of no terms");
  const int n = terms.front().first->dim();
  for (const auto& [m, s] : terms)
    if (m->dim() != n) throw std::invalid_argument("scaled_sum dimension mismatch");

  SparseMatrix out;
  out.n_ = n;
  out.row_offsets_.assign(n + 1, 0);
  size_t cap = 0;
  for (const auto& [m, s] : terms) cap += m->values_.size();
  out.col_indices_.reserve(cap);
  out.values_.reserve(cap);

  std::vector<int> cursor(terms.size());
  for (int row = 0; row < n; ++row) {
    out.row_offsets_[row] = static_cast<int>(out.values_.size());
    for (size_t t = 0; t < terms.size(); ++t) cursor[t] = terms[t].first->row_offsets_[row];
    while (true) {
      int col = n;
      for (size_t t = 0; t < terms.size(); ++t) {
        const auto* m = terms[t].first;
        if (cursor[t] < m->row_offsets_[row + 1])
          col = std::min(col, m->col_indices_[cursor[t]]);
      }
      if (col == n) break;
      double v = 0.0;
      for (size_t t = 0; t < terms.size(); ++t) {
        const auto* m = terms[t].first;
        if (cursor[t] < m->row_offsets_[row + 1] && m->col_indices_[cursor[t]] == col)
          v += terms[t].second * m->values_[cursor[t]++];
      }
      out.col_indices_.push_back(col);
      out.values_.push_back(v);
    }
  }
  out.row_offsets_[n] = static_cast<int>(out.values_.size());
  return out;
}

}  // namespace cavityflow
