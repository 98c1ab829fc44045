#include "galpha/hypermat/material.hpp"

#include <cmath>

#include "galpha/errors.hpp"

namespace galpha::hypermat {

LameParams lame_from_engineering(double E, double nu, double rho0) {
  if (!(E > 0.0)) throw InvalidArgument("lame_from_engineering: E must be positive");
  if (!(nu > 0.0 && nu < 0.5))
    throw InvalidArgument("lame_from_engineering: nu must lie in (0, 0.5)");
  LameParams p;
  p.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  p.mu = E / (2.0 * (1.0 + nu));
  p.rho0 = rho0;
  if (!(p.lambda > 0.0 && p.mu > 0.0))
    throw InvalidArgument("lame_from_engineering: Lame constants must be positive");
  return p;
}

namespace {

double checked_det(const Eigen::Matrix3d& F) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw ConstitutiveError("element inversion: det F <= 0");
  return J;
}

}  // namespace

double stored_energy(const Eigen::Matrix3d& F, const LameParams& mat) {
  const double J = checked_det(F);
  const double I1 = (F.transpose() * F).trace();
  return 0.5 * mat.mu * (I1 - 3.0) + 0.25 * mat.lambda * (J * J - 1.0) -
         (0.5 * mat.lambda + mat.mu) * std::log(J);
}

Eigen::Matrix3d piola_stress(const Eigen::Matrix3d& F, const LameParams& mat) {
  const double J = checked_det(F);
  const Eigen::Matrix3d FinvT = F.inverse().transpose();
  return 0.5 * mat.lambda * (J * J - 1.0) * FinvT + mat.mu * (F - FinvT);
}

Eigen::Matrix3d TangentTensor::contract(const Eigen::Matrix3d& H) const {
  Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) R(i, j) += a[i][j][k][l] * H(k, l);
  return R;
}

TangentTensor tangent(const Eigen::Matrix3d& F, const LameParams& mat) {
  // Directional derivative of P:
  //   dP[H] = lambda J^2 tr(F^{-1}H) F^{-T}
  //         + (mu - lambda (J^2-1)/2) F^{-T} H^T F^{-T} + mu H,
  // i.e. A_{abcd} = lambda J^2 (F^{-T})_{ab}(F^{-T})_{cd}
  //              + (mu - lambda (J^2-1)/2)(F^{-T})_{ad}(F^{-T})_{cb}
  //              + mu d_{ac} d_{bd}.
  const double J = checked_det(F);
  const Eigen::Matrix3d FinvT = F.inverse().transpose();
  const double c1 = mat.lambda * J * J;
  const double c2 = mat.mu - 0.5 * mat.lambda * (J * J - 1.0);
  TangentTensor A;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double v = c1 * FinvT(a, b) * FinvT(c, d) + c2 * FinvT(a, d) * FinvT(c, b);
          if (a == c && b == d) v += mat.mu;
          A.a[a][b][c][d] = v;
        }
  return A;
}

Eigen::Matrix3d deformation_gradient(const Eigen::MatrixXd& grad_u, int dim) {
  Eigen::Matrix3d F = Eigen::Matrix3d::Identity();
  F.topLeftCorner(dim, dim) += grad_u;
  return F;
}

}  // namespace galpha::hypermat
