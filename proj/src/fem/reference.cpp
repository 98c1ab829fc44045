#include "galpha/fem/reference.hpp"

#include <Eigen/LU>

#include "galpha/errors.hpp"

namespace galpha::fem {

namespace {

// Lattice points of the order-p simplex with corners first.
std::vector<Eigen::Vector3d> lattice(int dim, int p) {
  std::vector<Eigen::Vector3d> pts;
  auto push_unique = [&](const Eigen::Vector3d& x) {
    for (const auto& q : pts)
      if ((q - x).norm() < 1e-12) return;
    pts.push_back(x);
  };
  // corners
  push_unique(Eigen::Vector3d::Zero());
  for (int d = 0; d < dim; ++d) push_unique(Eigen::Vector3d::Unit(d));
  // remaining lattice points
  if (dim == 2) {
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p - i; ++j)
        push_unique(Eigen::Vector3d(double(i) / p, double(j) / p, 0.0));
  } else {
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p - i; ++j)
        for (int k = 0; k <= p - i - j; ++k)
          push_unique(Eigen::Vector3d(double(i) / p, double(j) / p, double(k) / p));
  }
  return pts;
}

}  // namespace

ReferenceElement::ReferenceElement(int dim, int order) : dim_(dim), order_(order) {
  if (dim != 2 && dim != 3) throw InvalidArgument("ReferenceElement: dim must be 2 or 3");
  if (order < 1 || order > 3)
    throw NotImplemented("ReferenceElement: order must be in 1..3");

  nodes_ = lattice(dim, order);

  for (int i = 0; i <= order; ++i)
    for (int j = 0; j <= order - i; ++j) {
      if (dim == 2) {
        exponents_.emplace_back(i, j, 0);
      } else {
        for (int k = 0; k <= order - i - j; ++k) exponents_.emplace_back(i, j, k);
      }
    }

  const int n = num_nodes();
  Eigen::MatrixXd V(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& e = exponents_[b];
      const auto& x = nodes_[a];
      V(a, b) = std::pow(x[0], e[0]) * std::pow(x[1], e[1]) * std::pow(x[2], e[2]);
    }
  coeffs_ = V.fullPivLu().inverse();  // column i holds coefficients of basis i
}

Eigen::VectorXd ReferenceElement::eval(const Eigen::Vector3d& xi) const {
  const int n = num_nodes();
  Eigen::VectorXd mono(n);
  for (int b = 0; b < n; ++b) {
    const auto& e = exponents_[b];
    mono[b] = std::pow(xi[0], e[0]) * std::pow(xi[1], e[1]) * std::pow(xi[2], e[2]);
  }
  return coeffs_.transpose() * mono;
}

Eigen::MatrixXd ReferenceElement::eval_grad(const Eigen::Vector3d& xi) const {
  const int n = num_nodes();
  Eigen::MatrixXd dmono(n, dim_);
  for (int b = 0; b < n; ++b) {
    const auto& e = exponents_[b];
    for (int d = 0; d < dim_; ++d) {
      if (e[d] == 0) {
        dmono(b, d) = 0.0;
        continue;
      }
      double v = e[d];
      for (int dd = 0; dd < 3; ++dd) {
        const int p = (dd == d) ? e[dd] - 1 : e[dd];
        v *= std::pow(xi[dd], p);
      }
      dmono(b, d) = v;
    }
  }
  return coeffs_.transpose() * dmono;  // n x dim
}

}  // namespace galpha::fem
