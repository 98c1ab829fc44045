#pragma once

namespace galpha::alphacore {

/// Generalized-alpha parameter set. beta/gamma are the paper's gamma_2 /
/// gamma_1; N is the corrector-sum truncation the family was derived for.
struct AlphaParams {
  double rho_b = 1.0;
  double rho_s = 1.0;
  double alpha_f = 0.0;
  double alpha_m = 0.5;
  double beta = 0.5;
  double gamma = 1.0;
  int N = 1;
};

/// Optimal N=1 family: alpha_f = 0, alpha_m = (2-rho_b)/(rho_b+1),
/// beta = (3 rho_b - 5)/((rho_b-2)(rho_b+1)^2), gamma = 1/2 - alpha_f + alpha_m.
AlphaParams params_n1(double rho_b);

/// N=2 family: alpha_f = 4/(1+4 rho_b), alpha_m as above, beta per its
/// quotient. alpha_f cannot be zero here.
AlphaParams params_n2(double rho_b);

/// Two-parameter family with alpha_f free:
/// alpha_m = (-rho_b rho_s + rho_s + 2)/(rho_b rho_s + rho_b + rho_s + 1),
/// beta from the general quotient. Throws ParameterizationError when the
/// beta denominator vanishes.
AlphaParams params_general(double rho_b, double rho_s, double alpha_f, int N = 1);

/// Stability limit Omega_s in Theta = dt^2 w^2. N=1: closed form
/// -12(rho_b-2)(rho_b+1)/(rho_b^2-5 rho_b+10). N=2: root of the quadratic
/// relation x + x^2 = S with x = (beta/alpha_m) Omega.
double stability_limit(const AlphaParams& p);

/// Closed-form bifurcation limit for the N=1 family,
/// (-3 rho_b^2 + 2 rho_b + 5)/(rho_b - 2). Returned as printed (negative);
/// the numeric sweep locates the crossing at |Omega_b|.
double bifurcation_limit(const AlphaParams& p);

}  // namespace galpha::alphacore
