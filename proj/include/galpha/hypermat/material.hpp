#pragma once

#include <Eigen/Dense>

namespace galpha::hypermat {

/// Isotropic Lame constants with the reference density carried alongside.
struct LameParams {
  double lambda;  // Pa
  double mu;      // Pa
  double rho0;    // kg/m^3
};

/// lambda = E nu / ((1+nu)(1-2nu)), mu = E / (2(1+nu)).
LameParams lame_from_engineering(double E, double nu, double rho0 = 1.0);

/// Fourth-order tangent dP/dF in component form A[a][b][c][d].
struct TangentTensor {
  double a[3][3][3][3];

  /// (A : H)_{ab} = A_{abcd} H_{cd}
  Eigen::Matrix3d contract(const Eigen::Matrix3d& H) const;
};

/// Compressible neo-Hookean stored energy
///   W = mu/2 (tr(F^T F) - 3) + lambda (J^2 - 1)/4 - (lambda/2 + mu) ln J.
/// Throws ConstitutiveError for J <= 0 (element inversion).
double stored_energy(const Eigen::Matrix3d& F, const LameParams& mat);

/// First Piola-Kirchhoff stress P = lambda (J^2-1)/2 F^{-T} + mu (F - F^{-T}).
Eigen::Matrix3d piola_stress(const Eigen::Matrix3d& F, const LameParams& mat);

/// Tangent dP/dF; at F = I reduces to lambda I (x) I + 2 mu * sym-identity.
TangentTensor tangent(const Eigen::Matrix3d& F, const LameParams& mat);

/// Embed a dim x dim displacement gradient as a 3x3 deformation gradient
/// (plane strain: F33 = 1 in 2D).
Eigen::Matrix3d deformation_gradient(const Eigen::MatrixXd& grad_u, int dim);

}  // namespace galpha::hypermat
