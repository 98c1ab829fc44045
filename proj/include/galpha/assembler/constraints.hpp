#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "galpha/fem/mesh.hpp"

namespace galpha::assembler {

using SpaceTimeField = std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)>;

struct DirichletSpec {
  std::string tag;                        // boundary tag this applies to
  std::array<bool, 3> comps{true, true, true};  // constrained components
  SpaceTimeField value;                   // u_D(X, t); masked components used
};

struct TractionSpec {
  std::string tag;
  SpaceTimeField value;  // force per reference area (per length in 2D)
};

struct BoundaryConditions {
  Eigen::Vector3d gravity = Eigen::Vector3d::Zero();
  SpaceTimeField body_force;  // optional extra force density f(X, t)
  std::vector<TractionSpec> tractions;
  std::vector<DirichletSpec> dirichlet;
};

/// Resolved Dirichlet constraints: one entry per constrained scalar dof,
/// with the dof layout node-major (dof = node * ncomp + comp).
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(const fem::Mesh& mesh, const std::vector<DirichletSpec>& specs, int ncomp);

  int ndof() const { return static_cast<int>(mask_.size()); }
  int num_constrained() const { return static_cast<int>(dofs_.size()); }
  bool empty() const { return dofs_.empty(); }
  const std::vector<char>& mask() const { return mask_; }
  const std::vector<int>& dofs() const { return dofs_; }

  /// Overwrite constrained entries of u with u_D(X, t).
  void apply_values(double t, Eigen::VectorXd& u) const;

  /// Overwrite constrained entries of v, a with time derivatives of u_D,
  /// evaluated by central differences in t.
  void apply_derivatives(double t, Eigen::VectorXd* v, Eigen::VectorXd* a) const;

  /// Vector with u_D(t1) - u_D(t0) at constrained dofs, zero elsewhere.
  Eigen::VectorXd increment(double t0, double t1) const;

  /// Vector with u_D_tt(t) at constrained dofs (central differences in t),
  /// zero elsewhere.
  Eigen::VectorXd accelerations(double t) const;

  /// Zero constrained entries in place.
  void zero_constrained(Eigen::VectorXd& x) const;

  /// Euclidean norm over free dofs only.
  double free_norm(const Eigen::VectorXd& x) const;

 private:
  struct Entry {
    int dof;
    int comp;
    Eigen::Vector3d X;
    int spec;  // index into specs_
  };
  std::vector<DirichletSpec> specs_;
  std::vector<Entry> entries_;
  std::vector<int> dofs_;
  std::vector<char> mask_;
};

}  // namespace galpha::assembler
