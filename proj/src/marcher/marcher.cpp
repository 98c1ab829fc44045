#include "galpha/marcher/marcher.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "galpha/errors.hpp"

namespace galpha::marcher {

std::pair<bool, double> adapt_dt(double e, double dt, const AdaptivityConfig& cfg) {
  auto update = [&](double err, double tol) {
    return cfg.rho_tol * std::pow(tol / err, 1.0 / cfg.d) * dt;
  };
  if (!(e <= cfg.tol)) return {false, update(e, cfg.tol)};  // catches NaN too
  if (e <= 0.0) return {true, update(cfg.tol_min, cfg.tol_min)};
  if (e < cfg.tol_min) return {true, update(e, cfg.tol_min)};
  return {true, dt};
}

Marcher::Marcher(System& sys, const assembler::MassMatrix& M, const alphacore::AlphaParams& params,
                 const AdaptivityConfig& cfg, alphacore::UpdateForm form, TruncationMode trunc,
                 assembler::ConstraintSet constraints)
    : sys_(sys),
      M_(M),
      p_(params),
      cfg_(cfg),
      form_(form),
      trunc_(trunc),
      constraints_(std::move(constraints)) {
  if (p_.beta == 0.0) throw ParameterizationError("marcher: beta must be nonzero");
  if (trunc_.kind == TruncationMode::Kind::FixedTerms && trunc_.terms < 1)
    throw InvalidArgument("marcher: fixed-terms truncation needs at least one term");
}

Eigen::VectorXd Marcher::masked_solve(const Eigen::VectorXd& rhs, int* iters) const {
  assembler::SolveReport rep;
  Eigen::VectorXd x = assembler::solve_mass(M_, rhs, cfg_.lin_tol, &rep,
                                            constraints_.empty() ? nullptr : &constraints_.mask());
  if (iters) *iters += rep.iterations;
  return x;
}

State Marcher::initialize(const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double t0) const {
  State s;
  s.t = t0;
  s.dt = cfg_.dt0;
  s.u = u0;
  s.v = v0;
  if (!constraints_.empty()) {
    constraints_.apply_values(t0, s.u);
    constraints_.apply_derivatives(t0, &s.v, nullptr);
  }
  Eigen::VectorXd rhs = sys_.external(t0) - sys_.residual(s.u);
  // Boundary inertia M_fc u_D''(t0) acts as a force on the interior rows.
  if (!constraints_.empty()) rhs -= M_.multiply(constraints_.accelerations(t0));
  s.a = masked_solve(rhs, nullptr);
  if (!constraints_.empty()) constraints_.apply_derivatives(t0, nullptr, &s.a);
  return s;
}

Eigen::VectorXd Marcher::corrector_sum(const assembler::SparseMatrix& K, double dt,
                                       const Eigen::VectorXd& first_term, double* e,
                                       int* iterations, int* solver_iters) const {
  const double factor = -(p_.alpha_f * p_.beta * dt * dt / p_.alpha_m);
  Eigen::VectorXd sum = first_term;
  Eigen::VectorXd prev = first_term;
  double prev_norm = constraints_.free_norm(first_term);
  double err = 0.0;
  int terms = 1;
  const int k_max =
      trunc_.kind == TruncationMode::Kind::FixedTerms ? trunc_.terms : cfg_.k_max;
  for (int k = 2; k <= k_max && factor != 0.0 && prev_norm > 0.0; ++k) {
    Eigen::VectorXd cur = masked_solve(factor * K.multiply(prev), solver_iters);
    constraints_.zero_constrained(cur);
    const double norm = constraints_.free_norm(cur);
    err = norm / prev_norm;
    sum += cur;
    prev.swap(cur);
    prev_norm = norm;
    terms = k;
    if (trunc_.kind == TruncationMode::Kind::ToTolerance && norm <= trunc_.tol) break;
  }
  if (e) *e = err;
  if (iterations) *iterations = terms;
  return sum;
}

StepReport Marcher::step(State& s) const {
  const double dt = s.dt;
  const double t_new = s.t + dt;
  StepReport rep;
  rep.dt_used = dt;

  Eigen::VectorXd R;
  assembler::SparseMatrix K;
  try {
    R = sys_.residual(s.u);
    K = sys_.tangent(s.u);
  } catch (const ConstitutiveError&) {
    rep.accepted = false;
    rep.e = std::numeric_limits<double>::infinity();
    rep.dt_next = cfg_.enabled ? dt / 2.0 : dt;
    return rep;
  }
  const Eigen::VectorXd F = sys_.external(s.t + p_.alpha_f * dt);
  const Eigen::VectorXd T = dt * s.v + 0.5 * dt * dt * s.a;
  const bool constrained = !constraints_.empty();
  // Constrained dofs follow u_D exactly. On the interior momentum rows the
  // boundary data enters as known forcing: the stiffness coupling sees the
  // prescribed increment g (through the first corrector term), and the mass
  // coupling sees the prescribed acceleration sampled at t_n + alpha_f dt,
  // the same point as the external load. Giving the known boundary
  // acceleration the alpha_m midpoint treatment of the unknowns perturbs
  // the balance at O(dt) and costs a convergence order.
  Eigen::VectorXd g, da_D;
  if (constrained) {
    g = constraints_.increment(s.t, t_new);
    da_D = constraints_.accelerations(s.t + p_.alpha_f * dt) - constraints_.accelerations(s.t);
  }

  Eigen::VectorXd du;
  if (form_ == alphacore::UpdateForm::Displacement) {
    Eigen::VectorXd L =
        (p_.beta * dt * dt / p_.alpha_m) * (F - M_.multiply(s.a) - R) + M_.multiply(T);
    if (constrained) {
      Eigen::VectorXd ghat = Eigen::VectorXd::Zero(g.size());
      for (int dof : constraints_.dofs())
        ghat[dof] = T[dof] + (p_.beta * dt * dt / p_.alpha_m) * da_D[dof];
      L -= M_.multiply(ghat);
    }
    Eigen::VectorXd d1 = masked_solve(L, &rep.solver_iterations);
    if (constrained)
      for (int dof : constraints_.dofs()) d1[dof] = g[dof];
    du = corrector_sum(K, dt, d1, &rep.e, &rep.iterations, &rep.solver_iterations);
  } else {
    Eigen::VectorXd Lhat =
        (F - M_.multiply(s.a) - R - p_.alpha_f * K.multiply(T)) / p_.alpha_m;
    if (constrained) {
      Eigen::VectorXd lift = Eigen::VectorXd::Zero(g.size());
      for (int dof : constraints_.dofs()) lift[dof] = da_D[dof] / p_.alpha_m;
      Lhat -= M_.multiply(lift);
    }
    Eigen::VectorXd d1 = masked_solve(Lhat, &rep.solver_iterations);
    if (constrained)
      // Seed so that T + beta dt^2 d1 equals g on constrained dofs; the
      // first corrector term then carries the K_fc g stiffness coupling.
      for (int dof : constraints_.dofs())
        d1[dof] = (g[dof] - T[dof]) / (p_.beta * dt * dt);
    Eigen::VectorXd da = corrector_sum(K, dt, d1, &rep.e, &rep.iterations, &rep.solver_iterations);
    du = T + (p_.beta * dt * dt) * da;
  }

  bool accepted;
  double dt_next;
  if (cfg_.enabled) {
    std::tie(accepted, dt_next) = adapt_dt(rep.e, dt, cfg_);
  } else {
    accepted = rep.e <= cfg_.tol;
    dt_next = dt;
  }
  rep.accepted = accepted;
  rep.dt_next = dt_next;
  if (!accepted) return rep;

  const Eigen::VectorXd da = (du - T) / (p_.beta * dt * dt);
  s.v += dt * (s.a + p_.gamma * da);
  s.a += da;
  s.u += du;
  s.t = t_new;
  if (constrained) {
    constraints_.apply_values(t_new, s.u);
    constraints_.apply_derivatives(t_new, &s.v, &s.a);
  }
  return rep;
}

MarchResult Marcher::run(State& s, double t_f, const Observer& observer) const {
  MarchResult res;
  if (s.dt <= 0.0) s.dt = cfg_.dt0;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_f));
  int consecutive = 0;
  while (s.t < t_f - eps) {
    s.dt = std::min(s.dt, t_f - s.t);
    StepReport r = step(s);
    res.reports.push_back(r);
    if (r.accepted) {
      ++res.accepted;
      consecutive = 0;
      if (observer) observer(res.accepted, s, r);
    } else {
      ++res.rejected;
      if (++consecutive >= cfg_.max_rejections) {
        res.abort_reason = "aborted: " + std::to_string(cfg_.max_rejections) +
                           " consecutive step rejections at t = " + std::to_string(s.t);
        return res;
      }
    }
    s.dt = r.dt_next;
    if (s.dt < cfg_.dt_min) {
      res.abort_reason = "aborted: dt underflow below dt_min at t = " + std::to_string(s.t);
      return res;
    }
  }
  res.completed = true;
  return res;
}

}  // namespace galpha::marcher
