#include "galpha/diagnostics/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "galpha/assembler/assemble.hpp"
#include "galpha/errors.hpp"

namespace galpha::diagnostics {

namespace {

using fem::Mesh;
using fem::QuadratureRule;
using fem::ReferenceElement;

Eigen::Vector3d map_point(const Mesh& mesh, int e, const Eigen::Vector3d& xi) {
  return mesh.nodes[mesh.elements[e][0]] + mesh.jacobian(e) * xi;
}

// Interpolated field value (ncomp components) at a quadrature point.
Eigen::Vector3d field_at(const fem::MappedBasis& mb, const std::vector<int>& conn,
                         const Eigen::VectorXd& w, int ncomp) {
  Eigen::Vector3d val = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < conn.size(); ++i)
    for (int c = 0; c < ncomp; ++c)
      val[c] += w[conn[i] * ncomp + c] * mb.values[static_cast<int>(i)];
  return val;
}

}  // namespace

Eigen::VectorXd ExactSolution::interpolate(
    const Mesh& mesh, double t,
    const std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)>& field) const {
  Eigen::VectorXd out(mesh.num_nodes() * ncomp);
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    Eigen::Vector3d val = field(mesh.nodes[n], t);
    for (int c = 0; c < ncomp; ++c) out[n * ncomp + c] = val[c];
  }
  return out;
}

double kinetic_energy(const Mesh& mesh, double rho0, const Eigen::VectorXd& v, int ncomp) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  double K = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      const Eigen::Vector3d vq = field_at(mb, mesh.elements[e], v, ncomp);
      K += 0.5 * rho0 * vq.squaredNorm() * rule.weights[q] * mb.detJ;
    }
  }
  return K;
}

double potential_energy(const Mesh& mesh, const hypermat::LameParams& mat,
                        const Eigen::VectorXd& u) {
  return assembler::total_stored_energy(mesh, u, mat);
}

Eigen::Vector3d linear_momentum(const Mesh& mesh, double rho0, const Eigen::VectorXd& v) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  Eigen::Vector3d L = Eigen::Vector3d::Zero();
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      L += rho0 * rule.weights[q] * mb.detJ * field_at(mb, mesh.elements[e], v, mesh.dim);
    }
  return L;
}

Eigen::Vector3d angular_momentum(const Mesh& mesh, double rho0, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& v) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order);
  Eigen::Vector3d J = Eigen::Vector3d::Zero();
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      const Eigen::Vector3d x =
          map_point(mesh, e, rule.points[q]) + field_at(mb, mesh.elements[e], u, mesh.dim);
      const Eigen::Vector3d vq = field_at(mb, mesh.elements[e], v, mesh.dim);
      J += rho0 * rule.weights[q] * mb.detJ * x.cross(vq);
    }
  return J;
}

std::pair<double, double> l2_error(const Mesh& mesh, const Eigen::VectorXd& u_h,
                                   const Eigen::VectorXd& v_h, const ExactSolution& exact,
                                   double t) {
  ReferenceElement elem(mesh.dim, mesh.order);
  QuadratureRule rule = fem::gauss_rule(mesh.dim, 2 * mesh.order + 2);
  double eu = 0.0, ev = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      auto mb = fem::eval_mapped_basis(mesh, elem, e, rule.points[q]);
      const Eigen::Vector3d X = map_point(mesh, e, rule.points[q]);
      const double w = rule.weights[q] * mb.detJ;
      Eigen::Vector3d du = field_at(mb, mesh.elements[e], u_h, exact.ncomp) - exact.u(X, t);
      Eigen::Vector3d dv = field_at(mb, mesh.elements[e], v_h, exact.ncomp) - exact.v(X, t);
      for (int c = exact.ncomp; c < 3; ++c) du[c] = dv[c] = 0.0;
      eu += w * du.squaredNorm();
      ev += w * dv.squaredNorm();
    }
  }
  return {std::sqrt(eu), std::sqrt(ev)};
}

std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)> mms_forcing(
    const ExactSolution& exact, const hypermat::LameParams& mat, double h_fd) {
  // grad u by central differences (first layer), Div P by a second layer.
  const double hg = 1e-5;
  auto piola_at = [exact, mat, hg](const Eigen::Vector3d& X, double t) {
    Eigen::Matrix3d F = Eigen::Matrix3d::Identity();
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d dX = Eigen::Vector3d::Zero();
      dX[j] = hg;
      F.col(j) += (exact.u(X + dX, t) - exact.u(X - dX, t)) / (2.0 * hg);
    }
    return hypermat::piola_stress(F, mat);
  };
  const double rho0 = mat.rho0;
  return [exact, piola_at, rho0, h_fd](const Eigen::Vector3d& X, double t) {
    Eigen::Vector3d div = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d dX = Eigen::Vector3d::Zero();
      dX[j] = h_fd;
      const Eigen::Matrix3d dP = piola_at(X + dX, t) - piola_at(X - dX, t);
      div += dP.col(j) / (2.0 * h_fd);
    }
    return (rho0 * exact.a(X, t) - div).eval();
  };
}

std::vector<ConvergenceRow> convergence_table(
    const std::vector<double>& dts,
    const std::function<std::pair<double, double>(double dt)>& run_at_dt) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ConvergenceRow> rows;
  for (double dt : dts) {
    ConvergenceRow row{dt, nan, nan, nan, nan, false};
    try {
      auto [eu, ev] = run_at_dt(dt);
      row.error_u = eu;
      row.error_v = ev;
      if (!std::isfinite(eu) || !std::isfinite(ev)) row.failed = true;
    } catch (const std::exception&) {
      row.failed = true;
    }
    if (!rows.empty() && !row.failed && !rows.back().failed) {
      const double r = std::log(dts[rows.size() - 1] / dt);
      row.order_u = std::log(rows.back().error_u / row.error_u) / r;
      row.order_v = std::log(rows.back().error_v / row.error_v) / r;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace galpha::diagnostics
