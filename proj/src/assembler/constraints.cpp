#include "galpha/assembler/constraints.hpp"

#include <cmath>
#include <map>

#include "galpha/errors.hpp"

namespace galpha::assembler {

ConstraintSet::ConstraintSet(const fem::Mesh& mesh, const std::vector<DirichletSpec>& specs,
                             int ncomp)
    : specs_(specs) {
  const int ndof = mesh.num_nodes() * ncomp;
  mask_.assign(ndof, 0);
  if (specs_.empty()) return;

  fem::ReferenceElement elem(mesh.dim, mesh.order);
  std::map<int, int> owner;  // dof -> spec index
  for (std::size_t s = 0; s < specs_.size(); ++s) {
    const auto& spec = specs_[s];
    bool tag_found = false;
    for (const auto& f : mesh.boundary) {
      if (f.tag != spec.tag) continue;
      tag_found = true;
      for (int node : mesh.facet_nodes(f, elem)) {
        for (int c = 0; c < ncomp; ++c) {
          if (!spec.comps[c]) continue;
          int dof = node * ncomp + c;
          auto [it, inserted] = owner.emplace(dof, static_cast<int>(s));
          if (inserted) {
            mask_[dof] = 1;
            entries_.push_back({dof, c, mesh.nodes[node], static_cast<int>(s)});
          } else if (it->second != static_cast<int>(s)) {
            // Same dof claimed by two specs: allowed only if they agree.
            const auto& other = specs_[it->second];
            for (double t : {0.0, 0.4337}) {
              double a = other.value(mesh.nodes[node], t)[c];
              double b = spec.value(mesh.nodes[node], t)[c];
              if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)))
                throw ConfigError("conflicting Dirichlet constraints on dof " +
                                  std::to_string(dof));
            }
          }
        }
      }
    }
    if (!tag_found) throw ConfigError("Dirichlet tag not found in mesh: " + spec.tag);
  }
  for (const auto& e : entries_) dofs_.push_back(e.dof);
  if (num_constrained() == ndof)
    throw ConfigError("all dofs constrained: no free degrees of freedom");
}

void ConstraintSet::apply_values(double t, Eigen::VectorXd& u) const {
  for (const auto& e : entries_) u[e.dof] = specs_[e.spec].value(e.X, t)[e.comp];
}

void ConstraintSet::apply_derivatives(double t, Eigen::VectorXd* v, Eigen::VectorXd* a) const {
  const double hv = 1e-6, ha = 1e-4;
  for (const auto& e : entries_) {
    const auto& f = specs_[e.spec].value;
    if (v) (*v)[e.dof] = (f(e.X, t + hv)[e.comp] - f(e.X, t - hv)[e.comp]) / (2.0 * hv);
    if (a)
      (*a)[e.dof] = (f(e.X, t + ha)[e.comp] - 2.0 * f(e.X, t)[e.comp] + f(e.X, t - ha)[e.comp]) /
                    (ha * ha);
  }
}

Eigen::VectorXd ConstraintSet::increment(double t0, double t1) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(ndof());
  for (const auto& e : entries_) {
    const auto& f = specs_[e.spec].value;
    g[e.dof] = f(e.X, t1)[e.comp] - f(e.X, t0)[e.comp];
  }
  return g;
}

Eigen::VectorXd ConstraintSet::accelerations(double t) const {
  const double h = 1e-4;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(ndof());
  for (const auto& e : entries_) {
    const auto& f = specs_[e.spec].value;
    a[e.dof] =
        (f(e.X, t + h)[e.comp] - 2.0 * f(e.X, t)[e.comp] + f(e.X, t - h)[e.comp]) / (h * h);
  }
  return a;
}

void ConstraintSet::zero_constrained(Eigen::VectorXd& x) const {
  for (int dof : dofs_) x[dof] = 0.0;
}

double ConstraintSet::free_norm(const Eigen::VectorXd& x) const {
  if (mask_.empty()) return x.norm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i)
    if (!mask_[i]) s += x[i] * x[i];
  return std::sqrt(s);
}

}  // namespace galpha::assembler
