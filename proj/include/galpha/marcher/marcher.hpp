#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "galpha/alphacore/params.hpp"
#include "galpha/alphacore/spectral.hpp"
#include "galpha/assembler/assemble.hpp"
#include "galpha/assembler/constraints.hpp"
#include "galpha/assembler/sparse.hpp"

namespace galpha::marcher {

struct State {
  double t = 0.0;
  double dt = 0.0;
  Eigen::VectorXd u, v, a;
};

struct TruncationMode {
  enum class Kind { FixedTerms, ToTolerance };
  Kind kind = Kind::FixedTerms;
  int terms = 2;      // FixedTerms: number of series terms kept
  double tol = 1e-10; // ToTolerance: stop when ||du_k|| <= tol

  static TruncationMode fixed_terms(int k) { return {Kind::FixedTerms, k, 0.0}; }
  static TruncationMode to_tolerance(double tol) { return {Kind::ToTolerance, 0, tol}; }
};

struct AdaptivityConfig {
  bool enabled = true;
  double tol = 0.1;        // cut-off for e
  double tol_min = 0.01;   // growth threshold (default tol/10)
  double rho_tol = 0.9;    // safety factor
  int d = 3;               // spatial dimension in the exponent 1/d
  int k_max = 50;          // corrector-iteration cap
  double dt0 = 1e-3;
  double dt_min = 1e-12;
  int max_rejections = 20; // consecutive rejections before abort
  double lin_tol = 1e-10;  // consistent-mass CG tolerance
};

struct StepReport {
  bool accepted = false;
  double e = 0.0;
  int iterations = 0;         // corrector terms evaluated
  double dt_used = 0.0;
  double dt_next = 0.0;
  int solver_iterations = 0;  // mass-solve CG iterations over the step
};

/// dt update F(e; dt; tol) = rho_tol (tol/e)^{1/d} dt. Returns (accepted,
/// dt_next): reject and shrink for e > tol, accept and grow for e < tol_min
/// (e = 0 treated as tol_min), accept and keep otherwise.
std::pair<bool, double> adapt_dt(double e, double dt, const AdaptivityConfig& cfg);

/// Internal-force provider: the marcher assembles R, K, F through this
/// interface once per attempted step (K frozen across corrector passes).
class System {
 public:
  virtual ~System() = default;
  virtual int ndof() const = 0;
  virtual Eigen::VectorXd residual(const Eigen::VectorXd& u) const = 0;
  virtual assembler::SparseMatrix tangent(const Eigen::VectorXd& u) const = 0;
  virtual Eigen::VectorXd external(double t) const = 0;
};

/// R(u) = K u with an optional time-dependent load.
class LinearSystem : public System {
 public:
  LinearSystem(assembler::SparseMatrix K,
               std::function<Eigen::VectorXd(double)> force = nullptr)
      : K_(std::move(K)), force_(std::move(force)) {}

  int ndof() const override { return K_.n; }
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const override { return K_.multiply(u); }
  assembler::SparseMatrix tangent(const Eigen::VectorXd&) const override { return K_; }
  Eigen::VectorXd external(double t) const override {
    return force_ ? force_(t) : Eigen::VectorXd::Zero(K_.n);
  }

 private:
  assembler::SparseMatrix K_;
  std::function<Eigen::VectorXd(double)> force_;
};

/// Finite-strain elastodynamics on a mesh.
class HyperelasticSystem : public System {
 public:
  HyperelasticSystem(const fem::Mesh& mesh, const hypermat::LameParams& mat,
                     const assembler::BoundaryConditions& bc)
      : mesh_(mesh), mat_(mat), bc_(bc) {}

  int ndof() const override { return mesh_.num_nodes() * mesh_.dim; }
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const override {
    return assembler::assemble_residual(mesh_, u, mat_);
  }
  assembler::SparseMatrix tangent(const Eigen::VectorXd& u) const override {
    return assembler::assemble_tangent(mesh_, u, mat_);
  }
  Eigen::VectorXd external(double t) const override {
    return assembler::assemble_external(mesh_, bc_, mat_.rho0, t);
  }

 private:
  const fem::Mesh& mesh_;
  hypermat::LameParams mat_;
  const assembler::BoundaryConditions& bc_;
};

struct MarchResult {
  std::vector<StepReport> reports;
  int accepted = 0;
  int rejected = 0;
  bool completed = false;
  std::string abort_reason;
};

/// Called after every accepted step.
using Observer = std::function<void(int step, const State& s, const StepReport& r)>;

/// Explicit predictor/multicorrector generalized-alpha marcher.
class Marcher {
 public:
  Marcher(System& sys, const assembler::MassMatrix& M, const alphacore::AlphaParams& params,
          const AdaptivityConfig& cfg, alphacore::UpdateForm form = alphacore::UpdateForm::Displacement,
          TruncationMode trunc = TruncationMode::fixed_terms(2),
          assembler::ConstraintSet constraints = {});

  /// Consistent initial state: u = u0, v = v0 (with Dirichlet values
  /// applied), a from the mass solve of F_ext(t0) - R(u0).
  State initialize(const Eigen::VectorXd& u0, const Eigen::VectorXd& v0, double t0 = 0.0) const;

  /// One attempted step of size s.dt; advances s only when accepted.
  StepReport step(State& s) const;

  /// Full loop to t_f with reject-and-retry and dt adaptivity.
  MarchResult run(State& s, double t_f, const Observer& observer = {}) const;

  /// Multicorrector series for a given predictor H (free-dof part); returns
  /// the summed increment and reports e and the term count. Exposed for the
  /// oracle tests.
  Eigen::VectorXd corrector_sum(const assembler::SparseMatrix& K, double dt,
                                const Eigen::VectorXd& first_term, double* e, int* iterations,
                                int* solver_iters) const;

 private:
  System& sys_;
  const assembler::MassMatrix& M_;
  alphacore::AlphaParams p_;
  AdaptivityConfig cfg_;
  alphacore::UpdateForm form_;
  TruncationMode trunc_;
  assembler::ConstraintSet constraints_;

  Eigen::VectorXd masked_solve(const Eigen::VectorXd& rhs, int* iters) const;
};

}  // namespace galpha::marcher
