#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "galpha/fem/mesh.hpp"
#include "galpha/hypermat/material.hpp"

namespace galpha::diagnostics {

struct EnergyReport {
  double t = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
};

struct MomentumReport {
  double t = 0.0;
  Eigen::Vector3d linear = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular = Eigen::Vector3d::Zero();
};

/// Exact space-time fields for error measurement and MMS setup. ncomp = 1
/// for the scalar wave path, mesh.dim for elasticity.
struct ExactSolution {
  int ncomp = 3;
  std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)> u;
  std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)> v;  // du/dt
  std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)> a;  // d2u/dt2

  Eigen::VectorXd interpolate(const fem::Mesh& mesh, double t,
                              const std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)>&
                                  field) const;
};

/// K = Int 1/2 rho0 |v|^2 dV (Gauss degree 2p), ncomp components per node.
double kinetic_energy(const fem::Mesh& mesh, double rho0, const Eigen::VectorXd& v, int ncomp);

/// P = Int W(I + grad u) dV.
double potential_energy(const fem::Mesh& mesh, const hypermat::LameParams& mat,
                        const Eigen::VectorXd& u);

/// L = Int rho0 v dV.
Eigen::Vector3d linear_momentum(const fem::Mesh& mesh, double rho0, const Eigen::VectorXd& v);

/// J = Int rho0 (X + u) x v dV (arm in the current configuration).
Eigen::Vector3d angular_momentum(const fem::Mesh& mesh, double rho0, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v);

/// L2 norms of u - u_h and v - v_h at time t.
std::pair<double, double> l2_error(const fem::Mesh& mesh, const Eigen::VectorXd& u_h,
                                   const Eigen::VectorXd& v_h, const ExactSolution& exact,
                                   double t);

/// Manufactured body-force density f = rho0 u_tt - Div P(I + grad u_exact),
/// with the stress divergence from central finite differences of step h_fd.
std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)> mms_forcing(
    const ExactSolution& exact, const hypermat::LameParams& mat, double h_fd = 1e-6);

struct ConvergenceRow {
  double dt;
  double error_u;
  double error_v;
  double order_u;  // NaN on the first row
  double order_v;
  bool failed = false;  // divergence at this dt
};

/// Observed orders from pairwise error ratios: order = log(e_i/e_{i+1}) /
/// log(dt_i/dt_{i+1}), attached to row i+1.
std::vector<ConvergenceRow> convergence_table(
    const std::vector<double>& dts,
    const std::function<std::pair<double, double>(double dt)>& run_at_dt);

}  // namespace galpha::diagnostics
