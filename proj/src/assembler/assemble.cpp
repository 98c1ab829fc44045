#include "galpha/assembler/assemble.hpp"

#include <cmath>

#include "galpha/errors.hpp"

namespace galpha::assembler {

namespace {

using fem::Mesh;
using fem::QuadratureRule;
using fem::ReferenceElement;

// Physical coordinates of reference point xi in (affine) element e.
Eigen::Vector3d map_point(const Mesh& mesh, int e, const Eigen::Vector3d& xi) {
  return mesh.nodes[mesh.elements[e][0]] + mesh.jacobian(e) * xi;
}

// Displacement gradient (dim x dim) at a quadrature point from nodal u.
Eigen::MatrixXd displacement_gradient(const fem::MappedBasis& mb, const Mesh& mesh,
                                      const std::vector<int>& conn, const Eigen::VectorXd& u,
                                      int ncomp) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ncomp, mesh.dim);
  for (std::size_t i = 0; i < conn.size(); ++i)
    for (int c = 0; c < ncomp; ++c)
      g.row(c) += u[conn[i] * ncomp + c] * mb.grads.row(static_cast<int>(i)).head(mesh.dim);
  return g;
}

}  // namespace

Eigen::VectorXd MassMatrix::multiply(const Eigen::VectorXd& x) const {
  if (kind == Kind::Lumped) return lumped.cwiseProduct(x);
  return consistent.multiply(x);
}

MassMatrix assemble_mass(const Mesh& mesh, double rho0, QuadratureRule::Kind kind, int ncomp) {
  if (rho0 <= 0.0) throw InvalidArgument("assemble_mass: rho0 must be positive");
  ReferenceElement elem(mesh.dim, mesh.order);
  const int ndof = mesh.num_nodes() * ncomp;

  MassMatrix M;
  if (kind == QuadratureRule::Kind::NodalLobatto) {
    QuadratureRule rule = fem::nodal_rule(elem);
    M.kind = MassMatrix::Kind::Lumped;
    M.lumped = Eigen::VectorXd::Zero(ndof);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const double detJ = fem::eval_mapped_basis(mesh, elem, e, rule.points[0]).detJ;
      const auto& conn = mesh.elements[e];
      // Vertex-collocated points: N_i(x_q) = delta_iq, so only the diagonal
      // survives.
      for (std::size_t q = 0; q < rule.points.size(); ++q)
        for (int c = 0; c < ncomp; ++c)
          M.lumped[conn[q] * ncomp + c] += rho0 * rule.weights[q] * detJ;
    }
    return M;
  }

  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  SparseBuilder builder(ndof);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    const int nn = static_cast<int>(conn.size());
    Eigen::MatrixXd Me = Eigen::MatrixXd::Zero(nn, nn);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      Me += (rho0 * rule.weights[q] * mb.detJ) * (mb.values * mb.values.transpose());
    }
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j)
        for (int c = 0; c < ncomp; ++c)
          builder.add(conn[i] * ncomp + c, conn[j] * ncomp + c, Me(i, j));
  }
  M.kind = MassMatrix::Kind::Consistent;
  M.consistent = builder.build();
  M.lumped = M.consistent.row_sums();
  return M;
}

Eigen::VectorXd solve_mass(const MassMatrix& M, const Eigen::VectorXd& rhs, double tol,
                           SolveReport* report, const std::vector<char>* skip) {
  const int n = M.n();
  if (rhs.size() != n) throw InvalidArgument("solve_mass: rhs size mismatch");
  auto skipped = [&](int i) { return skip && (*skip)[i]; };

  if (M.kind == MassMatrix::Kind::Lumped) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = skipped(i) ? rhs[i] : rhs[i] / M.lumped[i];
    if (report) *report = {0, 0.0};
    return x;
  }

  Eigen::VectorXd b = rhs;
  if (skip)
    for (int i = 0; i < n; ++i)
      if ((*skip)[i]) b[i] = 0.0;
  const double normb = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (normb > 0.0) {
    auto precond = [&](const Eigen::VectorXd& r) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = skipped(i) ? 0.0 : r[i] / M.lumped[i];
      return z;
    };
    auto apply = [&](const Eigen::VectorXd& p) {
      Eigen::VectorXd q = M.consistent.multiply(p);
      if (skip)
        for (int i = 0; i < n; ++i)
          if ((*skip)[i]) q[i] = 0.0;
      return q;
    };
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = precond(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    const int cap = 200;
    int it = 0;
    bool converged = false;
    while (it < cap) {
      Eigen::VectorXd q = apply(p);
      double alpha = rz / p.dot(q);
      x += alpha * p;
      r -= alpha * q;
      ++it;
      if (r.norm() <= tol * normb) {
        converged = true;
        break;
      }
      z = precond(r);
      double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    if (!converged)
      throw SolverError("mass solve: CG failed to converge in " + std::to_string(cap) +
                        " iterations");
    if (report) *report = {it, r.norm() / normb};
  } else if (report) {
    *report = {0, 0.0};
  }
  if (skip)
    for (int i = 0; i < n; ++i)
      if ((*skip)[i]) x[i] = rhs[i];
  return x;
}

Eigen::VectorXd assemble_residual(const Mesh& mesh, const Eigen::VectorXd& u,
                                  const hypermat::LameParams& mat) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  const int ncomp = mesh.dim;
  Eigen::VectorXd R = Eigen::VectorXd::Zero(mesh.num_nodes() * ncomp);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      Eigen::MatrixXd g = displacement_gradient(mb, mesh, conn, u, ncomp);
      Eigen::Matrix3d P;
      try {
        P = hypermat::piola_stress(hypermat::deformation_gradient(g, mesh.dim), mat);
      } catch (const ConstitutiveError& err) {
        throw ConstitutiveError(err.what(), e);
      }
      const double w = rule.weights[q] * mb.detJ;
      for (std::size_t i = 0; i < conn.size(); ++i)
        for (int c = 0; c < ncomp; ++c) {
          double s = 0.0;
          for (int b = 0; b < mesh.dim; ++b) s += P(c, b) * mb.grads(static_cast<int>(i), b);
          R[conn[i] * ncomp + c] += w * s;
        }
    }
  }
  return R;
}

SparseMatrix assemble_tangent(const Mesh& mesh, const Eigen::VectorXd& u,
                              const hypermat::LameParams& mat) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  const int ncomp = mesh.dim;
  SparseBuilder builder(mesh.num_nodes() * ncomp);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    const int nn = static_cast<int>(conn.size());
    Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(nn * ncomp, nn * ncomp);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      Eigen::MatrixXd g = displacement_gradient(mb, mesh, conn, u, ncomp);
      hypermat::TangentTensor A;
      try {
        A = hypermat::tangent(hypermat::deformation_gradient(g, mesh.dim), mat);
      } catch (const ConstitutiveError& err) {
        throw ConstitutiveError(err.what(), e);
      }
      const double w = rule.weights[q] * mb.detJ;
      for (int i = 0; i < nn; ++i)
        for (int c = 0; c < ncomp; ++c)
          for (int j = 0; j < nn; ++j)
            for (int d = 0; d < ncomp; ++d) {
              double s = 0.0;
              for (int b = 0; b < mesh.dim; ++b)
                for (int f = 0; f < mesh.dim; ++f)
                  s += A.a[c][b][d][f] * mb.grads(i, b) * mb.grads(j, f);
              Ke(i * ncomp + c, j * ncomp + d) += w * s;
            }
    }
    for (int i = 0; i < nn; ++i)
      for (int c = 0; c < ncomp; ++c)
        for (int j = 0; j < nn; ++j)
          for (int d = 0; d < ncomp; ++d)
            builder.add(conn[i] * ncomp + c, conn[j] * ncomp + d, Ke(i * ncomp + c, j * ncomp + d));
  }
  return builder.build();
}

double total_stored_energy(const Mesh& mesh, const Eigen::VectorXd& u,
                           const hypermat::LameParams& mat) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  const int ncomp = mesh.dim;
  double W = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      Eigen::MatrixXd g = displacement_gradient(mb, mesh, conn, u, ncomp);
      W += rule.weights[q] * mb.detJ *
           hypermat::stored_energy(hypermat::deformation_gradient(g, mesh.dim), mat);
    }
  }
  return W;
}

SparseMatrix assemble_laplace(const Mesh& mesh) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  SparseBuilder builder(mesh.num_nodes());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    const int nn = static_cast<int>(conn.size());
    Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(nn, nn);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      Eigen::MatrixXd gd = mb.grads.leftCols(mesh.dim);
      Ke += (rule.weights[q] * mb.detJ) * (gd * gd.transpose());
    }
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) builder.add(conn[i], conn[j], Ke(i, j));
  }
  return builder.build();
}

Eigen::VectorXd assemble_external(const Mesh& mesh, const BoundaryConditions& bc, double rho0,
                                  double t) {
  ReferenceElement elem(mesh.dim, mesh.order);
  const int ncomp = mesh.dim;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.num_nodes() * ncomp);

  const bool has_body = bc.body_force != nullptr;
  if (bc.gravity.head(ncomp).norm() > 0.0 || has_body) {
    QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& conn = mesh.elements[e];
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
        Eigen::Vector3d f = rho0 * bc.gravity;
        if (has_body) f += bc.body_force(map_point(mesh, e, rule.points[q]), t);
        const double w = rule.weights[q] * mb.detJ;
        for (std::size_t i = 0; i < conn.size(); ++i)
          for (int c = 0; c < ncomp; ++c)
            F[conn[i] * ncomp + c] += w * mb.values[static_cast<int>(i)] * f[c];
      }
    }
  }

  if (bc.tractions.empty()) return F;
  // Reference corners of the parent simplex.
  std::vector<Eigen::Vector3d> ref_corner(mesh.dim + 1, Eigen::Vector3d::Zero());
  for (int k = 0; k < mesh.dim; ++k) ref_corner[k + 1][k] = 1.0;
  QuadratureRule frule = fem::gauss_rule(mesh.dim - 1, 2 * mesh.order);

  for (const auto& tr : bc.tractions) {
    bool found = false;
    for (const auto& f : mesh.boundary) {
      if (f.tag != tr.tag) continue;
      found = true;
      const auto& conn = mesh.elements[f.element];
      // Local corner ids of the facet (all corners except local_facet).
      std::vector<int> local;
      for (int k = 0; k <= mesh.dim; ++k)
        if (k != f.local_facet) local.push_back(k);
      // Physical facet corners and area scaling.
      std::vector<Eigen::Vector3d> v;
      for (int k : local) v.push_back(mesh.nodes[conn[k]]);
      double scale;
      if (mesh.dim == 3)
        scale = ((v[1] - v[0]).cross(v[2] - v[0])).norm();  // = 2 * area
      else
        scale = (v[1] - v[0]).norm();
      for (std::size_t q = 0; q < frule.points.size(); ++q) {
        // Facet reference point -> parent reference coordinates.
        Eigen::Vector3d xi = ref_corner[local[0]];
        Eigen::Vector3d X = v[0];
        for (int k = 0; k < mesh.dim - 1; ++k) {
          xi += frule.points[q][k] * (ref_corner[local[k + 1]] - ref_corner[local[0]]);
          X += frule.points[q][k] * (v[k + 1] - v[0]);
        }
        Eigen::VectorXd N = elem.eval(xi);
        Eigen::Vector3d tval = tr.value(X, t);
        const double w = frule.weights[q] * scale;
        for (std::size_t i = 0; i < conn.size(); ++i)
          for (int c = 0; c < ncomp; ++c)
            F[conn[i] * ncomp + c] += w * N[static_cast<int>(i)] * tval[c];
      }
    }
    if (!found) throw ConfigError("traction tag not found in mesh: " + tr.tag);
  }
  return F;
}

Eigen::VectorXd assemble_scalar_load(const Mesh& mesh,
                                     const std::function<double(const Eigen::Vector3d&, double)>& f,
                                     double t) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& conn = mesh.elements[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      const double fq = f(map_point(mesh, e, rule.points[q]), t);
      const double w = rule.weights[q] * mb.detJ;
      for (std::size_t i = 0; i < conn.size(); ++i)
        F[conn[i]] += w * mb.values[static_cast<int>(i)] * fq;
    }
  }
  return F;
}

}  // namespace galpha::assembler
