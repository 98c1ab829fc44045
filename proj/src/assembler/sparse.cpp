#include "galpha/assembler/sparse.hpp"

#include <algorithm>

namespace galpha::assembler {

Eigen::VectorXd SparseMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
  return y;
}

double SparseMatrix::coeff(int i, int j) const {
  auto first = col_idx.begin() + row_ptr[i];
  auto last = col_idx.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values[it - col_idx.begin()];
}

Eigen::VectorXd SparseMatrix::diagonal() const {
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = coeff(i, i);
  return d;
}

Eigen::VectorXd SparseMatrix::row_sums() const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s[i] += values[k];
  return s;
}

Eigen::MatrixXd SparseMatrix::dense() const {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) D(i, col_idx[k]) = values[k];
  return D;
}

void SparseMatrix::eliminate(const std::vector<char>& mask) {
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      int j = col_idx[k];
      if (mask[i] || mask[j]) values[k] = (i == j) ? 1.0 : 0.0;
    }
  }
}

SparseMatrix SparseBuilder::build() const {
  SparseMatrix m;
  m.n = n_;
  m.row_ptr.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) {
    auto entries = rows_[i];
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    int prev = -1;
    for (const auto& [j, v] : entries) {
      if (j == prev) {
        m.values.back() += v;
      } else {
        m.col_idx.push_back(j);
        m.values.push_back(v);
        prev = j;
      }
    }
    m.row_ptr[i + 1] = static_cast<int>(m.col_idx.size());
  }
  return m;
}

}  // namespace galpha::assembler
