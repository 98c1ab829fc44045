#pragma once

#include <Eigen/Dense>
#include <vector>

namespace galpha::assembler {

/// Square sparse matrix in compressed row storage. Column indices are
/// strictly increasing within each row. Immutable after build.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col_idx;
  std::vector<double> values;

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double coeff(int i, int j) const;  // 0 if not stored
  Eigen::VectorXd diagonal() const;
  Eigen::VectorXd row_sums() const;

  /// Dense copy; test/oracle use on small systems only.
  Eigen::MatrixXd dense() const;

  /// Zero rows and columns of flagged dofs and set a unit diagonal
  /// (symmetric elimination). `mask[i] != 0` marks a constrained dof.
  void eliminate(const std::vector<char>& mask);
};

/// Accumulates (i, j, v) triplets element by element, then compresses.
class SparseBuilder {
 public:
  explicit SparseBuilder(int n) : n_(n), rows_(n) {}

  void add(int i, int j, double v) { rows_[i].emplace_back(j, v); }
  SparseMatrix build() const;

 private:
  int n_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

}  // namespace galpha::assembler
