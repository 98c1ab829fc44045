#pragma once

#include <Eigen/Dense>
#include <vector>

namespace galpha::fem {

/// Lagrange basis on the reference simplex (triangle or tetrahedron),
/// polynomial order 1..3. Nodes sit on the equispaced barycentric lattice
/// with the corner vertices listed first, so node i = vertex i for i <= dim.
class ReferenceElement {
 public:
  ReferenceElement(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Eigen::Vector3d>& nodes() const { return nodes_; }

  /// Basis values at a reference point.
  Eigen::VectorXd eval(const Eigen::Vector3d& xi) const;

  /// Basis gradients w.r.t. reference coordinates; rows = basis functions.
  Eigen::MatrixXd eval_grad(const Eigen::Vector3d& xi) const;

 private:
  int dim_;
  int order_;
  std::vector<Eigen::Vector3d> nodes_;
  std::vector<Eigen::Vector3i> exponents_;  // monomial exponents
  Eigen::MatrixXd coeffs_;                  // basis i = sum_j coeffs_(j,i) x^e_j
};

}  // namespace galpha::fem
