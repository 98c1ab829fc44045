#include "galpha/alphacore/params.hpp"

#include <cmath>
#include <string>

#include "galpha/errors.hpp"

namespace galpha::alphacore {

namespace {

void check_rho(double rho, const char* name) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw InvalidArgument(std::string(name) + " must be in [0, 1], got " + std::to_string(rho));
}

}  // namespace

AlphaParams params_n1(double rho_b) {
  check_rho(rho_b, "rho_b");
  AlphaParams p;
  p.rho_b = rho_b;
  p.rho_s = rho_b;
  p.alpha_f = 0.0;
  p.alpha_m = (2.0 - rho_b) / (rho_b + 1.0);
  p.beta = (3.0 * rho_b - 5.0) / ((rho_b - 2.0) * (rho_b + 1.0) * (rho_b + 1.0));
  p.gamma = 0.5 - p.alpha_f + p.alpha_m;
  p.N = 1;
  return p;
}

AlphaParams params_n2(double rho_b) {
  check_rho(rho_b, "rho_b");
  AlphaParams p;
  p.rho_b = rho_b;
  p.rho_s = rho_b;
  p.alpha_f = 4.0 / (1.0 + 4.0 * rho_b);
  p.alpha_m = (2.0 - rho_b) / (rho_b + 1.0);
  const double af = p.alpha_f;
  const double rp1 = rho_b + 1.0;
  const double num = af * af * (rho_b - 2.0) * rp1 * rp1 +
                     af * (-3.0 * rho_b * rho_b + 3.0 * rho_b + 6.0) + 3.0 * rho_b - 5.0;
  const double den = rp1 * rp1 * (af * rho_b + af + rho_b - 2.0);
  if (std::abs(den) < 1e-14) throw ParameterizationError("params_n2: beta denominator vanishes");
  p.beta = num / den;
  p.gamma = 0.5 - p.alpha_f + p.alpha_m;
  p.N = 2;
  return p;
}

AlphaParams params_general(double rho_b, double rho_s, double alpha_f, int N) {
  check_rho(rho_b, "rho_b");
  check_rho(rho_s, "rho_s");
  AlphaParams p;
  p.rho_b = rho_b;
  p.rho_s = rho_s;
  p.alpha_f = alpha_f;
  p.alpha_m = (-rho_b * rho_s + rho_s + 2.0) / (rho_b * rho_s + rho_b + rho_s + 1.0);
  const double b = rho_b, s = rho_s, af = alpha_f;
  const double inner = af * (b + 1.0) * (s + 1.0) * ((b - 1.0) * s - 2.0) - b * b * s +
                       2.0 * b * (s * s + s - 1.0) - 2.0 * s * s - 7.0 * s - 6.0;
  const double num = af * (b + 1.0) * inner + 2.0 * b * b * s + b * (s * s + 2.0 * s - 3.0) -
                     s * s - 4.0 * s - 5.0;
  const double den =
      (b + 1.0) * (b + 1.0) * (s + 1.0) * (af * (b + 1.0) * (s + 1.0) + (b - 1.0) * s - 2.0);
  if (std::abs(den) < 1e-14)
    throw ParameterizationError("params_general: beta denominator vanishes");
  p.beta = num / den;
  p.gamma = 0.5 - p.alpha_f + p.alpha_m;
  p.N = N;
  return p;
}

double stability_limit(const AlphaParams& p) {
  if (p.N == 1) {
    const double b = p.rho_b;
    return -12.0 * (b - 2.0) * (b + 1.0) / (b * b - 5.0 * b + 10.0);
  }
  // x + x^2 = S with x = (beta/alpha_m) Omega_s.
  const double am = p.alpha_m, af = p.alpha_f, be = p.beta;
  const double den = 4.0 * be * (af - am) + 2.0 * am * (2.0 * af - (af - am - 1.0) + am) + am;
  const double S = -be * (4.0 - 8.0 * am) / den;
  const double disc = 1.0 + 4.0 * S;
  if (disc < 0.0) throw ParameterizationError("stability_limit: relation has no real root");
  return am * (std::sqrt(disc) - 1.0) / (2.0 * be);
}

double bifurcation_limit(const AlphaParams& p) {
  if (p.N != 1) throw NotImplemented("bifurcation_limit: closed form known for the N=1 family");
  const double b = p.rho_b;
  return (-3.0 * b * b + 2.0 * b + 5.0) / (b - 2.0);
}

}  // namespace galpha::alphacore
