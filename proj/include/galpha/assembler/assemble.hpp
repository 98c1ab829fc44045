#pragma once

#include <Eigen/Dense>
#include <vector>

#include "galpha/assembler/constraints.hpp"
#include "galpha/assembler/sparse.hpp"
#include "galpha/fem/mesh.hpp"
#include "galpha/fem/quadrature.hpp"
#include "galpha/hypermat/material.hpp"

namespace galpha::assembler {

/// Consistent (sparse) or lumped (diagonal) mass operator. The lumped
/// row-sum diagonal is kept for both variants; for the consistent variant it
/// serves as the CG preconditioner.
struct MassMatrix {
  enum class Kind { Consistent, Lumped };
  Kind kind = Kind::Lumped;
  SparseMatrix consistent;  // populated for Kind::Consistent
  Eigen::VectorXd lumped;   // diagonal (Lumped) or row sums (Consistent)

  int n() const { return static_cast<int>(lumped.size()); }
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
};

/// Mass matrix with ncomp scalar dofs per node (dof = node*ncomp + comp).
/// Interior Gauss quadrature gives the consistent variant, the nodal rule
/// the lumped one (p = 1 only).
MassMatrix assemble_mass(const fem::Mesh& mesh, double rho0, fem::QuadratureRule::Kind kind,
                         int ncomp);

/// M x = rhs. Lumped: componentwise division (0 iterations). Consistent:
/// conjugate gradients preconditioned by the lumped diagonal, relative
/// residual < tol, iteration cap 200. `skip` marks dofs treated as identity
/// rows (rhs passed through); used for Dirichlet elimination.
Eigen::VectorXd solve_mass(const MassMatrix& M, const Eigen::VectorXd& rhs, double tol,
                           SolveReport* report = nullptr,
                           const std::vector<char>* skip = nullptr);

/// Internal-force residual R_i = Int grad(Psi_i) : P(I + grad u) dV,
/// interior Gauss of degree 2p. Throws ConstitutiveError (with element id)
/// on inversion at a quadrature point.
Eigen::VectorXd assemble_residual(const fem::Mesh& mesh, const Eigen::VectorXd& u,
                                  const hypermat::LameParams& mat);

/// Tangent stiffness dR/du at u_n (Gateaux derivative of the residual).
SparseMatrix assemble_tangent(const fem::Mesh& mesh, const Eigen::VectorXd& u,
                              const hypermat::LameParams& mat);

/// Total stored energy Int W(I + grad u) dV with the residual's quadrature.
double total_stored_energy(const fem::Mesh& mesh, const Eigen::VectorXd& u,
                           const hypermat::LameParams& mat);

/// Scalar stiffness K_ij = Int grad(Psi_i) . grad(Psi_j) dV (wave equation).
SparseMatrix assemble_laplace(const fem::Mesh& mesh);

/// External load at time t: gravity rho0 g plus optional body force density
/// plus surface tractions on tagged facets.
Eigen::VectorXd assemble_external(const fem::Mesh& mesh, const BoundaryConditions& bc,
                                  double rho0, double t);

/// Scalar load Int Psi_i f(X, t) dV (wave-equation forcing).
Eigen::VectorXd assemble_scalar_load(const fem::Mesh& mesh,
                                     const std::function<double(const Eigen::Vector3d&, double)>& f,
                                     double t);

}  // namespace galpha::assembler
