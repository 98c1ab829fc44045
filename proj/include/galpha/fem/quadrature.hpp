#pragma once

#include <Eigen/Dense>
#include <vector>

#include "galpha/fem/reference.hpp"

namespace galpha::fem {

struct QuadratureRule {
  enum class Kind { InteriorGauss, NodalLobatto };
  Kind kind;
  int dim;
  std::vector<Eigen::Vector3d> points;  // reference-simplex coordinates
  std::vector<double> weights;          // sum to the reference measure

  double total_weight() const;
};

/// Interior Gauss rule on the reference simplex, exact for all polynomials up
/// to `degree` (built by conical product of Gauss-Jacobi line rules).
QuadratureRule gauss_rule(int simplex_dim, int degree);

/// Vertex-collocated rule for mass lumping; linear elements only.
QuadratureRule nodal_rule(const ReferenceElement& elem);

/// 1D Gauss-Legendre rule on [0,1] (used for line-facet integrals).
void gauss_legendre_01(int npts, std::vector<double>& x, std::vector<double>& w);

}  // namespace galpha::fem
