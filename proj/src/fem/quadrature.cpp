#include "galpha/fem/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

#include "galpha/errors.hpp"

namespace galpha::fem {

namespace {

// Gauss-Jacobi rule for weight (1-x)^alpha on [0,1], n points; exact for
// polynomials up to degree 2n-1 against that weight. Golub-Welsch on the
// symmetric Jacobi recurrence matrix.
void gauss_jacobi_01(int n, int alpha, std::vector<double>& x, std::vector<double>& w) {
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  auto diag = [&](int k) {
    if (k == 0) return (b - a) / (a + b + 2.0);
    const double s = 2.0 * k + a + b;
    return (b * b - a * a) / (s * (s + 2.0));
  };
  auto offdiag2 = [&](int k) {  // beta_k for k >= 1
    const double s = 2.0 * k + a + b;
    return 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
  };
  for (int k = 0; k < n; ++k) T(k, k) = diag(k);
  for (int k = 1; k < n; ++k) {
    const double e = std::sqrt(offdiag2(k));
    T(k, k - 1) = T(k - 1, k) = e;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  // mu0 = integral of (1-t)^a (1+t)^b over [-1,1]
  double mu0 = std::pow(2.0, a + b + 1.0);
  for (int k = 1; k <= alpha; ++k) mu0 *= double(k) / double(k + 1);  // B(a+1,1)
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = es.eigenvalues()[i];       // node on [-1,1]
    x[i] = 0.5 * (1.0 + t);                     // map to [0,1]
    const double v0 = es.eigenvectors()(0, i);  // first component
    // weight on [0,1] with weight (1-x)^alpha: scale mu0 by the Jacobian
    w[i] = mu0 * v0 * v0 / std::pow(2.0, a + b + 1.0);
  }
}

}  // namespace

double QuadratureRule::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void gauss_legendre_01(int npts, std::vector<double>& x, std::vector<double>& w) {
  gauss_jacobi_01(npts, 0, x, w);
}

QuadratureRule gauss_rule(int simplex_dim, int degree) {
  if (simplex_dim != 1 && simplex_dim != 2 && simplex_dim != 3)
    throw InvalidArgument("gauss_rule: simplex_dim must be 1, 2 or 3");
  if (degree < 1 || degree > 12) throw NotImplemented("gauss_rule: unsupported degree");

  const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::InteriorGauss;
  rule.dim = simplex_dim;

  if (simplex_dim == 1) {
    std::vector<double> x, w;
    gauss_legendre_01(n, x, w);
    for (int i = 0; i < n; ++i) {
      rule.points.emplace_back(x[i], 0.0, 0.0);
      rule.weights.push_back(w[i]);
    }
    return rule;
  }

  // Collapsed (Duffy) coordinates: the (1-x)^k factors of the volume element
  // are absorbed into Gauss-Jacobi weights so exactness holds degree-for-degree.
  if (simplex_dim == 2) {
    std::vector<double> xu, wu, xv, wv;
    gauss_jacobi_01(n, 1, xu, wu);
    gauss_legendre_01(n, xv, wv);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = xu[i];
        const double y = xv[j] * (1.0 - x);
        rule.points.emplace_back(x, y, 0.0);
        rule.weights.push_back(wu[i] * wv[j]);
      }
    return rule;
  }

  std::vector<double> xu, wu, xv, wv, xs, ws;
  gauss_jacobi_01(n, 2, xu, wu);
  gauss_jacobi_01(n, 1, xv, wv);
  gauss_legendre_01(n, xs, ws);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = xu[i];
        const double y = xv[j] * (1.0 - x);
        const double z = xs[k] * (1.0 - x) * (1.0 - xv[j]);
        rule.points.emplace_back(x, y, z);
        rule.weights.push_back(wu[i] * wv[j] * ws[k]);
      }
  return rule;
}

QuadratureRule nodal_rule(const ReferenceElement& elem) {
  if (elem.order() != 1)
    throw NotImplemented("nodal_rule: lumping quadrature is defined for order 1 only");
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::NodalLobatto;
  rule.dim = elem.dim();
  const double measure = (elem.dim() == 2) ? 0.5 : 1.0 / 6.0;
  const int nv = elem.num_nodes();
  for (int i = 0; i < nv; ++i) {
    rule.points.push_back(elem.nodes()[i]);
    rule.weights.push_back(measure / nv);
  }
  return rule;
}

}  // namespace galpha::fem
