#include "galpha/runner/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "galpha/assembler/assemble.hpp"
#include "galpha/errors.hpp"

namespace galpha::runner {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fem::QuadratureRule::Kind mass_kind(const ScenarioConfig& cfg) {
  return cfg.mass == "lumped" ? fem::QuadratureRule::Kind::NodalLobatto
                              : fem::QuadratureRule::Kind::InteriorGauss;
}

alphacore::UpdateForm update_form(const ScenarioConfig& cfg) {
  return cfg.update_form == "acceleration" ? alphacore::UpdateForm::Acceleration
                                           : alphacore::UpdateForm::Displacement;
}

marcher::TruncationMode truncation(const ScenarioConfig& cfg) {
  return cfg.truncation == "to_tolerance" ? marcher::TruncationMode::to_tolerance(cfg.trunc_tol)
                                          : marcher::TruncationMode::fixed_terms(cfg.terms);
}

marcher::AdaptivityConfig adaptivity(const ScenarioConfig& cfg, int dim) {
  marcher::AdaptivityConfig a;
  a.enabled = cfg.adaptive;
  a.tol = cfg.tol;
  a.tol_min = cfg.tol_min;
  a.rho_tol = cfg.rho_tol;
  a.d = dim;
  a.k_max = cfg.k_max;
  a.dt0 = cfg.dt0;
  a.dt_min = cfg.dt_min;
  a.max_rejections = cfg.max_rejections;
  a.lin_tol = cfg.lin_tol;
  return a;
}

/// Per-step diagnostics shared by the CSV writer and callers.
struct DiagnosticsContext {
  const Scenario* scen;
  assembler::SparseMatrix laplace;  // scalar path only

  void row(std::ostream& os, const marcher::State& s, const marcher::StepReport& r) const {
    double K, P;
    Eigen::Vector3d L = Eigen::Vector3d::Zero(), J = Eigen::Vector3d::Zero();
    if (scen->scalar) {
      K = diagnostics::kinetic_energy(scen->mesh, scen->mat.rho0, s.v, 1);
      P = 0.5 * s.u.dot(laplace.multiply(s.u));
    } else {
      K = diagnostics::kinetic_energy(scen->mesh, scen->mat.rho0, s.v, scen->ncomp);
      P = diagnostics::potential_energy(scen->mesh, scen->mat, s.u);
      L = diagnostics::linear_momentum(scen->mesh, scen->mat.rho0, s.v);
      J = diagnostics::angular_momentum(scen->mesh, scen->mat.rho0, s.u, s.v);
    }
    os << fmt(s.t) << ',' << fmt(r.dt_used) << ',' << fmt(r.e) << ',' << r.iterations << ','
       << fmt(K) << ',' << fmt(P) << ',' << fmt(K + P) << ',' << fmt(L.x()) << ',' << fmt(L.y())
       << ',' << fmt(L.z()) << ',' << fmt(J.x()) << ',' << fmt(J.y()) << ',' << fmt(J.z())
       << '\n';
  }
};

std::unique_ptr<marcher::System> make_system(const Scenario& scen, const Phase& phase,
                                             const assembler::SparseMatrix* laplace) {
  if (scen.scalar) return std::make_unique<marcher::LinearSystem>(*laplace);
  return std::make_unique<marcher::HyperelasticSystem>(scen.mesh, scen.mat, phase.bc);
}

RunOutcome march(const ScenarioConfig& cfg, const Scenario& scen, std::ostream* csv,
                 const RunObserver& observer) {
  auto params = integrator_params(cfg);
  auto M = assembler::assemble_mass(scen.mesh, scen.mat.rho0, mass_kind(cfg), scen.ncomp);
  auto acfg = adaptivity(cfg, scen.mesh.dim);
  auto form = update_form(cfg);
  auto trunc = truncation(cfg);

  DiagnosticsContext diag{&scen, {}};
  if (scen.scalar) diag.laplace = assembler::assemble_laplace(scen.mesh);
  if (csv) *csv << "t,dt,e,iters,K,P,T,Lx,Ly,Lz,Jx,Jy,Jz\n";

  RunOutcome out;
  marcher::State st;
  int accepted_total = 0;
  bool vtk = cfg.stride > 0 && !cfg.vtk_dir.empty();
  if (vtk) fs::create_directories(cfg.vtk_dir);

  auto on_accept = [&](int, const marcher::State& s, const marcher::StepReport& r) {
    ++accepted_total;
    if (csv) diag.row(*csv, s, r);
    if (vtk && accepted_total % cfg.stride == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06d.vtk", accepted_total);
      fem::write_vtk(scen.mesh, (fs::path(cfg.vtk_dir) / name).string(),
                     {{"displacement", s.u}, {"velocity", s.v}}, scen.ncomp);
    }
    if (observer) observer(s, r);
  };

  bool first = true;
  for (const auto& phase : scen.phases) {
    assembler::ConstraintSet constraints(scen.mesh, phase.bc.dirichlet, scen.ncomp);
    auto sys = make_system(scen, phase, &diag.laplace);
    marcher::Marcher m(*sys, M, params, acfg, form, trunc, constraints);
    if (first) {
      st = m.initialize(scen.u0, scen.v0, 0.0);
      st.dt = cfg.dt0;
      first = false;
    } else {
      double dt = st.dt;
      st = m.initialize(st.u, st.v, st.t);
      st.dt = dt;
    }
    auto res = m.run(st, phase.t_end, on_accept);
    out.accepted += res.accepted;
    out.rejected += res.rejected;
    if (!res.completed) {
      out.completed = false;
      out.abort_reason = res.abort_reason;
      out.final_state = st;
      return out;
    }
  }
  out.completed = true;
  out.final_state = st;
  return out;
}

}  // namespace

alphacore::AlphaParams integrator_params(const ScenarioConfig& cfg) {
  if (cfg.family == "n1") return alphacore::params_n1(cfg.rho_b);
  if (cfg.family == "n2") return alphacore::params_n2(cfg.rho_b);
  return alphacore::params_general(cfg.rho_b, cfg.rho_s, cfg.alpha_f);
}

RunOutcome run_simulation(const ScenarioConfig& cfg, const RunObserver& observer) {
  Scenario scen = build_scenario(cfg);
  fs::path csv_path(cfg.csv);
  if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
  std::ofstream csv(csv_path);
  if (!csv) throw ConfigError("cannot open CSV output: " + cfg.csv);
  return march(cfg, scen, &csv, observer);
}

std::vector<diagnostics::ConvergenceRow> convergence_study(const ScenarioConfig& cfg,
                                                           const std::vector<double>& dts,
                                                           const std::string& csv_path) {
  Scenario scen = build_scenario(cfg);
  if (!scen.has_exact)
    throw ConfigError("scenario '" + cfg.scenario + "' has no exact solution for a convergence study");
  if (dts.empty()) throw ConfigError("convergence study needs a non-empty dt list");

  auto solve_at = [&](double dt) {
    ScenarioConfig fixed = cfg;
    fixed.adaptive = false;
    fixed.dt0 = dt;
    RunOutcome out = march(fixed, scen, nullptr, {});
    if (!out.completed)
      throw SolverError("fixed-step run at dt = " + fmt(dt) + " aborted: " + out.abort_reason);
    return out.final_state;
  };

  // Temporal error only: compare against a fine-step run on the same mesh,
  // so the fixed spatial discretization error cancels. The exact solution
  // anchors the reference via a direct L2 check.
  double dt_ref = *std::min_element(dts.begin(), dts.end()) / 8.0;
  marcher::State ref = solve_at(dt_ref);
  auto Mu = assembler::assemble_mass(scen.mesh, 1.0, fem::QuadratureRule::Kind::InteriorGauss,
                                     scen.ncomp);
  auto l2 = [&](const Eigen::VectorXd& d) { return std::sqrt(d.dot(Mu.multiply(d))); };

  auto run_at_dt = [&](double dt) {
    marcher::State st = solve_at(dt);
    return std::make_pair(l2(st.u - ref.u), l2(st.v - ref.v));
  };
  auto rows = diagnostics::convergence_table(dts, run_at_dt);

  if (!csv_path.empty()) {
    fs::path p(csv_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p);
    os << "dt,error_u,error_v,order_u,order_v,failed\n";
    for (const auto& r : rows)
      os << fmt(r.dt) << ',' << fmt(r.error_u) << ',' << fmt(r.error_v) << ',' << fmt(r.order_u)
         << ',' << fmt(r.order_v) << ',' << (r.failed ? 1 : 0) << '\n';
  }
  return rows;
}

alphacore::SweepResult write_spectra(const std::string& family, double rho_b, double theta_max,
                                     int samples, const std::string& csv_path) {
  alphacore::AlphaParams p;
  if (family == "n1") p = alphacore::params_n1(rho_b);
  else if (family == "n2") p = alphacore::params_n2(rho_b);
  else throw ConfigError("spectra family must be n1 or n2");
  auto sweep = alphacore::spectral_sweep(p, theta_max, samples, alphacore::UpdateForm::Displacement,
                                         p.N);
  if (!csv_path.empty()) {
    fs::path path(csv_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path);
    os << "theta,rho\n";
    for (const auto& pt : sweep.curve) os << fmt(pt.theta) << ',' << fmt(pt.radius) << '\n';
  }
  return sweep;
}

std::string validate_config(const ScenarioConfig& cfg) {
  Scenario scen = build_scenario(cfg);
  auto params = integrator_params(cfg);
  auto M = assembler::assemble_mass(scen.mesh, scen.mat.rho0, mass_kind(cfg), scen.ncomp);
  int constrained = 0;
  for (const auto& phase : scen.phases) {
    assembler::ConstraintSet c(scen.mesh, phase.bc.dirichlet, scen.ncomp);
    constrained = std::max(constrained, c.num_constrained());
  }
  std::ostringstream os;
  os << "scenario: " << scen.name << "\n"
     << "mesh: " << scen.mesh.num_elements() << " elements, " << scen.mesh.num_nodes()
     << " nodes, " << scen.mesh.num_nodes() * scen.ncomp << " dofs\n"
     << "constrained dofs (max over phases): " << constrained << "\n"
     << "phases: " << scen.phases.size() << "\n"
     << "integrator: " << cfg.family << " (alpha_f = " << params.alpha_f
     << ", alpha_m = " << params.alpha_m << ", beta = " << params.beta
     << ", gamma = " << params.gamma << ", N = " << params.N << ")\n"
     << "mass: " << cfg.mass << " (" << M.n() << " dofs)\n"
     << "adaptivity: " << (cfg.adaptive ? "on" : "off") << ", dt0 = " << cfg.dt0
     << ", t_f = " << cfg.t_f << "\n";
  return os.str();
}

}  // namespace galpha::runner
