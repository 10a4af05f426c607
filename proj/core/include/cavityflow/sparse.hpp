#ifndef CAVITYFLOW_SPARSE_HPP
#define CAVITYFLOW_SPARSE_HPP

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cavityflow {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square sparse matrix in compressed sparse row form; column indices are
/// strictly increasing within each row.
class SparseMatrix {
public:
  SparseMatrix() = default;

  /// Builds CSR from (row, col, value) triplets, accumulating duplicates.
  static SparseMatrix from_triplets(int n, std::vector<Triplet> triplets);

  int dim() const { return n_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// entry lookup; zero when the entry is not stored
  double coeff(int row, int col) const;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  double max_abs_row_sum() const;  // infinity norm

  /// Union-pattern scaled sum  sum_k scale_k * A_k  of same-dimension matrices.
  static SparseMatrix scaled_sum(const std::vector<std::pair<const SparseMatrix*, double>>& terms);

private:
  int n_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

}  // namespace cavityflow

#endif
