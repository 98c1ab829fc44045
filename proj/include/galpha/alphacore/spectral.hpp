#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "galpha/alphacore/params.hpp"

namespace galpha::alphacore {

enum class UpdateForm { Displacement, Acceleration };

/// Per-step modal map on the state (U, dt U', dt^2 U''), G = A^{-1} B.
struct AmplificationMatrix {
  Eigen::Matrix3d G;

  double G1() const { return G.trace(); }           // trace
  double G2() const;                                // sum of principal 2x2 minors
  double G3() const { return G.determinant(); }     // determinant
  std::array<std::complex<double>, 3> eigenvalues() const;
  double spectral_radius() const;
};

/// Roots of x^3 + b x^2 + c x + d (Cardano, complex arithmetic).
std::array<std::complex<double>, 3> solve_cubic(double b, double c, double d);

/// Amplification matrix at Theta = dt^2 w^2 with an N-term corrector sum.
AmplificationMatrix amplification_matrix(const AlphaParams& p, double theta, UpdateForm form,
                                         int N);

struct SweepPoint {
  double theta;
  double radius;
};

struct SweepResult {
  std::vector<SweepPoint> curve;
  double omega_s;  // first crossing of 1 + 1e-9, in Theta (NaN if none found)
  double theta_b;  // principal-root coalescence, in Theta (NaN if none found)
  double omega_b;  // theta_b scaled by beta/alpha_m, the closed form's units
};

/// Spectral radius over a uniform Theta grid [0, theta_max], with bisected
/// stability and bifurcation limits.
SweepResult spectral_sweep(const AlphaParams& p, double theta_max, int samples, UpdateForm form,
                           int N);

/// Observed global convergence order on the scalar oscillator u'' + w^2 u = 0
/// over one period (least-squares slope of error vs dt across halvings).
/// The error combines displacement and velocity: hypot(du, dv/w).
double modal_order_check(const AlphaParams& p, int N,
                         UpdateForm form = UpdateForm::Displacement);

}  // namespace galpha::alphacore
