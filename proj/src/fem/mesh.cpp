#include "galpha/fem/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>

#include "galpha/errors.hpp"

namespace galpha::fem {

Eigen::Matrix3d Mesh::jacobian(int element) const {
  Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
  const auto& conn = elements[element];
  for (int c = 0; c < dim; ++c) J.col(c).head(3) = nodes[conn[c + 1]] - nodes[conn[0]];
  if (dim == 2) {
    J.col(2) = Eigen::Vector3d::UnitZ();
    J.row(2).head(2).setZero();
  }
  return J;
}

double Mesh::signed_volume(int element) const {
  const double measure = (dim == 2) ? 0.5 : 1.0 / 6.0;
  return jacobian(element).determinant() * measure;
}

double Mesh::volume() const {
  double v = 0.0;
  for (int e = 0; e < num_elements(); ++e) v += std::abs(signed_volume(e));
  return v;
}

std::vector<int> Mesh::facet_corners(int element, int local_facet) const {
  std::vector<int> ids;
  for (int c = 0; c <= dim; ++c)
    if (c != local_facet) ids.push_back(elements[element][c]);
  return ids;
}

std::vector<int> Mesh::facet_nodes(const BoundaryFacet& f, const ReferenceElement& elem) const {
  // Barycentric coordinate opposite corner `local_facet` vanishes on the facet.
  std::vector<int> ids;
  for (int i = 0; i < elem.num_nodes(); ++i) {
    const auto& x = elem.nodes()[i];
    const double lambda =
        (f.local_facet == 0) ? 1.0 - x[0] - x[1] - (dim == 3 ? x[2] : 0.0) : x[f.local_facet - 1];
    if (std::abs(lambda) < 1e-12) ids.push_back(elements[f.element][i]);
  }
  return ids;
}

MappedBasis eval_mapped_basis(const Mesh& mesh, const ReferenceElement& elem, int e,
                              const Eigen::Vector3d& xi) {
  MappedBasis out;
  const Eigen::Matrix3d J = mesh.jacobian(e);
  out.detJ = J.determinant();
  if (out.detJ <= 0.0)
    throw GeometryError("eval_mapped_basis: degenerate element " + std::to_string(e) +
                        " (detJ <= 0)");
  out.values = elem.eval(xi);
  const Eigen::MatrixXd dref = elem.eval_grad(xi);  // n x dim
  const Eigen::Matrix3d Jinv = J.inverse();
  out.grads.resize(dref.rows(), mesh.dim);
  for (int i = 0; i < dref.rows(); ++i) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    g.head(mesh.dim) = dref.row(i).transpose();
    const Eigen::Vector3d gp = Jinv.transpose() * g;
    out.grads.row(i) = gp.head(mesh.dim).transpose();
  }
  return out;
}

namespace {

constexpr std::array<std::array<int, 3>, 6> kAxisPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

struct CoordKey {
  std::int64_t a, b, c;
  bool operator<(const CoordKey& o) const {
    return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
  }
};

}  // namespace

Mesh build_box_mesh(const std::vector<double>& extents, const std::vector<int>& divisions,
                    int dim, int order) {
  if (dim != 2 && dim != 3) throw InvalidArgument("build_box_mesh: dim must be 2 or 3");
  if (static_cast<int>(extents.size()) != dim || static_cast<int>(divisions.size()) != dim)
    throw InvalidArgument("build_box_mesh: extents/divisions size must equal dim");
  for (double L : extents)
    if (!(L > 0.0)) throw InvalidArgument("build_box_mesh: extents must be positive");
  for (int n : divisions)
    if (n < 1) throw InvalidArgument("build_box_mesh: divisions must be >= 1");
  if (order < 1 || order > 3) throw NotImplemented("build_box_mesh: order must be in 1..3");

  Mesh mesh;
  mesh.dim = dim;
  mesh.order = order;

  const int nx = divisions[0];
  const int ny = divisions[1];
  const int nz = (dim == 3) ? divisions[2] : 0;
  std::vector<double> h(3, 0.0);
  for (int d = 0; d < dim; ++d) h[d] = extents[d] / divisions[d];

  // vertex grid
  std::vector<int> vid;
  const int vnx = nx + 1, vny = ny + 1, vnz = (dim == 3) ? nz + 1 : 1;
  vid.resize(vnx * vny * vnz);
  auto grid = [&](int i, int j, int k) { return (k * vny + j) * vnx + i; };
  for (int k = 0; k < vnz; ++k)
    for (int j = 0; j < vny; ++j)
      for (int i = 0; i < vnx; ++i) {
        vid[grid(i, j, k)] = mesh.num_nodes();
        mesh.nodes.emplace_back(i * h[0], j * h[1], (dim == 3) ? k * h[2] : 0.0);
      }

  std::vector<std::array<int, 4>> corner_elems;
  if (dim == 2) {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int v00 = vid[grid(i, j, 0)], v10 = vid[grid(i + 1, j, 0)];
        const int v01 = vid[grid(i, j + 1, 0)], v11 = vid[grid(i + 1, j + 1, 0)];
        corner_elems.push_back({v00, v10, v11, -1});
        corner_elems.push_back({v00, v11, v01, -1});
      }
  } else {
    // Kuhn split: 6 tets per cell sharing the main diagonal, one per axis
    // permutation; compatible across faces under translation.
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          auto cv = [&](int a, int b, int c) { return vid[grid(i + a, j + b, k + c)]; };
          for (const auto& perm : kAxisPerms) {
            std::array<int, 3> ofs = {0, 0, 0};
            std::array<int, 4> tet;
            tet[0] = cv(0, 0, 0);
            for (int s = 0; s < 3; ++s) {
              ofs[perm[s]] = 1;
              tet[s + 1] = cv(ofs[0], ofs[1], ofs[2]);
            }
            // enforce positive orientation
            const Eigen::Vector3d a = mesh.nodes[tet[1]] - mesh.nodes[tet[0]];
            const Eigen::Vector3d b = mesh.nodes[tet[2]] - mesh.nodes[tet[0]];
            const Eigen::Vector3d c = mesh.nodes[tet[3]] - mesh.nodes[tet[0]];
            if (a.cross(b).dot(c) < 0.0) std::swap(tet[2], tet[3]);
            corner_elems.push_back(tet);
          }
        }
  }

  // element connectivities; higher orders add deduplicated lattice nodes
  const ReferenceElement ref(dim, order);
  const double tol = 1e-9 * (*std::max_element(extents.begin(), extents.end()));
  std::map<CoordKey, int> node_of;
  auto key_of = [&](const Eigen::Vector3d& x) {
    return CoordKey{std::llround(x[0] / tol), std::llround(x[1] / tol),
                    std::llround(x[2] / tol)};
  };
  for (int i = 0; i < mesh.num_nodes(); ++i) node_of[key_of(mesh.nodes[i])] = i;

  for (const auto& tet : corner_elems) {
    std::vector<int> conn(ref.num_nodes());
    const Eigen::Vector3d x0 = mesh.nodes[tet[0]];
    Eigen::Matrix3d J = Eigen::Matrix3d::Identity();
    for (int c = 0; c < dim; ++c) J.col(c) = mesh.nodes[tet[c + 1]] - x0;
    for (int a = 0; a < ref.num_nodes(); ++a) {
      if (a <= dim) {
        conn[a] = tet[a];
        continue;
      }
      const Eigen::Vector3d x = x0 + J * ref.nodes()[a];
      const auto key = key_of(x);
      auto it = node_of.find(key);
      if (it == node_of.end()) {
        it = node_of.emplace(key, mesh.num_nodes()).first;
        mesh.nodes.push_back(x);
      }
      conn[a] = it->second;
    }
    mesh.elements.push_back(std::move(conn));
  }

  // boundary facets: facet corner sets appearing exactly once
  std::map<std::vector<int>, std::pair<int, int>> facet_owner;
  std::map<std::vector<int>, int> facet_count;
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int f = 0; f <= dim; ++f) {
      auto corners = mesh.facet_corners(e, f);
      std::sort(corners.begin(), corners.end());
      facet_count[corners]++;
      facet_owner[corners] = {e, f};
    }
  const char* axis_names[3] = {"x", "y", "z"};
  for (const auto& [corners, count] : facet_count) {
    if (count != 1) continue;
    const auto [e, f] = facet_owner.at(corners);
    std::string tag = "untagged";
    for (int d = 0; d < dim && tag == "untagged"; ++d) {
      bool at_min = true, at_max = true;
      for (int v : corners) {
        at_min &= std::abs(mesh.nodes[v][d]) < tol;
        at_max &= std::abs(mesh.nodes[v][d] - extents[d]) < tol;
      }
      if (at_min) tag = std::string(axis_names[d]) + "-min";
      if (at_max) tag = std::string(axis_names[d]) + "-max";
    }
    mesh.boundary.push_back({e, f, tag});
  }

  return mesh;
}

void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& point_vectors,
               int ncomp) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_vtk: cannot open " + path);
  out.precision(12);
  out << "# vtk DataFile Version 3.0\ngalpha snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& x : mesh.nodes) out << x[0] << " " << x[1] << " " << x[2] << "\n";
  const int nv = mesh.verts_per_elem();
  out << "CELLS " << mesh.num_elements() << " " << mesh.num_elements() * (nv + 1) << "\n";
  for (const auto& conn : mesh.elements) {
    out << nv;
    for (int c = 0; c < nv; ++c) out << " " << conn[c];  // corner vertices
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.num_elements() << "\n";
  const int cell_type = (mesh.dim == 3) ? 10 : 5;
  for (int e = 0; e < mesh.num_elements(); ++e) out << cell_type << "\n";
  if (!point_vectors.empty()) {
    out << "POINT_DATA " << mesh.num_nodes() << "\n";
    for (const auto& [name, field] : point_vectors) {
      out << "VECTORS " << name << " double\n";
      for (int i = 0; i < mesh.num_nodes(); ++i) {
        for (int c = 0; c < 3; ++c)
          out << ((c < ncomp) ? field[i * ncomp + c] : 0.0) << (c < 2 ? " " : "\n");
      }
    }
  }
}

}  // namespace galpha::fem
