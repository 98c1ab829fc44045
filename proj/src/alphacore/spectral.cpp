#include "galpha/alphacore/spectral.hpp"

#include <cmath>
#include <limits>

#include "galpha/errors.hpp"

namespace galpha::alphacore {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double corrector_sum(double q, int N) {
  double s = 0.0, term = 1.0;
  for (int j = 0; j < N; ++j) {
    s += term;
    term *= q;
  }
  return s;
}

// Sign of the cubic discriminant of the characteristic polynomial:
// negative iff the roots include a complex-conjugate pair.
double cubic_discriminant(const AmplificationMatrix& m) {
  const double b = -m.G1(), c = m.G2(), d = -m.G3();
  return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * c * c * c -
         27.0 * d * d;
}

}  // namespace

double AmplificationMatrix::G2() const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) s += G(i, i) * G(j, j) - G(i, j) * G(j, i);
  return s;
}

std::array<std::complex<double>, 3> solve_cubic(double b, double c, double d) {
  using C = std::complex<double>;
  // Depressed form t^3 + p t + q with x = t - b/3.
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double shift = -b / 3.0;
  if (p == 0.0 && q == 0.0) return {C(shift), C(shift), C(shift)};
  const C disc = std::sqrt(C(q * q / 4.0 + p * p * p / 27.0));
  C u3 = -q / 2.0 + disc;
  if (std::abs(u3) < 1e-3 * std::abs(disc) + 1e-300) u3 = -q / 2.0 - disc;
  const C u = std::pow(u3, 1.0 / 3.0);
  const C w(-0.5, std::sqrt(3.0) / 2.0);  // primitive cube root of unity
  std::array<C, 3> roots;
  C uk = u;
  for (int k = 0; k < 3; ++k) {
    roots[k] = uk - p / (3.0 * uk) + shift;
    uk *= w;
  }
  return roots;
}

std::array<std::complex<double>, 3> AmplificationMatrix::eigenvalues() const {
  auto roots = solve_cubic(-G1(), G2(), -G3());
  // A defective triple root splits by ~cbrt(eps) under Cardano; the mean is
  // the trace/3, which is accurate, so collapse a mutually close cluster
  // onto it (rho_b = 1 at the stability limit has lambda = -1 threefold).
  {
    double scale = 1.0, gap = 0.0;
    for (int i = 0; i < 3; ++i) {
      scale = std::max(scale, 1.0 + std::abs(roots[i]));
      for (int j = i + 1; j < 3; ++j) gap = std::max(gap, std::abs(roots[i] - roots[j]));
    }
    if (gap < 5e-5 * scale) {
      const std::complex<double> mean(G1() / 3.0);
      return {mean, mean, mean};
    }
  }
  // A defective double root splits by ~sqrt(eps) under Cardano; the pair
  // midpoint is accurate, so collapse near-coincident roots onto it.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double scale = 1.0 + std::max(std::abs(roots[i]), std::abs(roots[j]));
      if (std::abs(roots[i] - roots[j]) < 1e-6 * scale) {
        const auto mid = 0.5 * (roots[i] + roots[j]);
        roots[i] = roots[j] = mid;
      }
    }
  return roots;
}

double AmplificationMatrix::spectral_radius() const {
  double r = 0.0;
  for (const auto& ev : eigenvalues()) r = std::max(r, std::abs(ev));
  return r;
}

AmplificationMatrix amplification_matrix(const AlphaParams& p, double theta, UpdateForm form,
                                         int N) {
  if (theta < 0.0) throw InvalidArgument("amplification_matrix: Theta must be >= 0");
  const double q = -p.alpha_f * p.beta * theta / p.alpha_m;
  const double S = corrector_sum(q, N);
  Eigen::Matrix3d A, B;
  A << 1.0, 0.0, -p.beta,
       0.0, 1.0, -p.gamma,
       0.0, 0.0, 0.0;  // third row set per form below
  B << 1.0, 1.0, 0.5 - p.beta,
       0.0, 1.0, 1.0 - p.gamma,
       0.0, 0.0, 0.0;
  if (form == UpdateForm::Displacement) {
    A.row(2) << 1.0, 0.0, 0.0;
    B.row(2) << 1.0 - (p.beta * theta / p.alpha_m) * S, S, (0.5 - p.beta / p.alpha_m) * S;
  } else {
    A.row(2) << 0.0, 0.0, 1.0;
    B.row(2) << -(theta / p.alpha_m) * S, -(p.alpha_f * theta / p.alpha_m) * S,
        1.0 - S / p.alpha_m - (p.alpha_f * theta / (2.0 * p.alpha_m)) * S;
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
  if (!lu.isInvertible()) throw ParameterizationError("amplification_matrix: singular A");
  return AmplificationMatrix{lu.solve(B)};
}

SweepResult spectral_sweep(const AlphaParams& p, double theta_max, int samples, UpdateForm form,
                           int N) {
  if (samples < 2) throw InvalidArgument("spectral_sweep: need at least 2 samples");
  SweepResult out;
  out.omega_s = kNaN;
  out.theta_b = kNaN;
  out.omega_b = kNaN;
  out.curve.reserve(samples);

  auto radius = [&](double th) { return amplification_matrix(p, th, form, N).spectral_radius(); };
  auto disc = [&](double th) { return cubic_discriminant(amplification_matrix(p, th, form, N)); };

  const double limit = 1.0 + 1e-9;
  std::vector<double> d(samples);
  double prev_theta = 0.0, prev_r = radius(0.0);
  d[0] = disc(0.0);
  out.curve.push_back({0.0, prev_r});
  for (int i = 1; i < samples; ++i) {
    const double th = theta_max * i / (samples - 1);
    const double r = radius(th);
    out.curve.push_back({th, r});
    d[i] = disc(th);
    if (std::isnan(out.omega_s) && prev_r <= limit && r > limit) {
      double lo = prev_theta, hi = th;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (radius(mid) > limit ? hi : lo) = mid;
      }
      out.omega_s = 0.5 * (lo + hi);
    }
    prev_theta = th;
    prev_r = r;
  }

  // Bifurcation: the principal complex pair coalesces where the cubic
  // discriminant rises to zero. Prefer an actual sign change; otherwise
  // refine the largest interior local maximum (the pair can touch the real
  // axis between grid points without a resolvable positive window). The
  // search stops at the stability limit: bifurcation precedes it, and the
  // all-real root structure beyond produces unrelated sign changes.
  const double h = theta_max / (samples - 1);
  int cap = samples;
  if (!std::isnan(out.omega_s))
    cap = std::min(samples, static_cast<int>((out.omega_s + h) / h) + 1);
  for (int i = 1; i < cap; ++i) {
    if (d[i - 1] < 0.0 && d[i] >= 0.0) {
      double lo = (i - 1) * h, hi = i * h;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (disc(mid) >= 0.0 ? hi : lo) = mid;
      }
      out.theta_b = 0.5 * (lo + hi);
      break;
    }
  }
  if (std::isnan(out.theta_b)) {
    int best = -1;
    for (int i = 1; i + 1 < cap; ++i)
      if (d[i] >= d[i - 1] && d[i] >= d[i + 1] && (best < 0 || d[i] > d[best])) best = i;
    if (best > 0) {
      double lo = (best - 1) * h, hi = (best + 1) * h;
      for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (disc(m1) < disc(m2))
          lo = m1;
        else
          hi = m2;
      }
      double th = 0.5 * (lo + hi);
      if (disc(th) > -1e-8) out.theta_b = th;
    }
  }
  if (!std::isnan(out.theta_b)) out.omega_b = (p.beta / p.alpha_m) * out.theta_b;
  return out;
}

double modal_order_check(const AlphaParams& p, int N, UpdateForm form) {
  const double omega = 2.0 * M_PI;
  const double period = 2.0 * M_PI / omega;
  std::vector<double> log_dt, log_err;
  for (int steps = 80; steps <= 1280; steps *= 2) {
    const double dt = period / steps;
    double u = 1.0, v = 0.0, a = -omega * omega;
    const double q = -p.alpha_f * p.beta * dt * dt * omega * omega / p.alpha_m;
    const double S = corrector_sum(q, N);
    for (int n = 0; n < steps; ++n) {
      const double taylor = dt * v + 0.5 * dt * dt * a;
      double du;
      if (form == UpdateForm::Displacement) {
        const double L =
            (p.beta * dt * dt / p.alpha_m) * (-a - omega * omega * u) + taylor;
        du = S * L;
      } else {
        const double Lhat =
            (-a - omega * omega * u - p.alpha_f * omega * omega * taylor) / p.alpha_m;
        du = taylor + p.beta * dt * dt * S * Lhat;
      }
      const double da = (du - taylor) / (p.beta * dt * dt);
      const double dv = dt * (a + p.gamma * da);
      u += du;
      v += dv;
      a += da;
    }
    const double du_err = u - std::cos(omega * period);
    const double dv_err = v + omega * std::sin(omega * period);
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(std::hypot(du_err, dv_err / omega)));
  }
  // Least-squares slope.
  const int n = static_cast<int>(log_dt.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += log_dt[i];
    sy += log_err[i];
    sxx += log_dt[i] * log_dt[i];
    sxy += log_dt[i] * log_err[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace galpha::alphacore
