#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "galpha/fem/quadrature.hpp"
#include "galpha/fem/reference.hpp"

namespace galpha::fem {

/// Simplex mesh (triangles in 2D, tetrahedra in 3D) with equispaced-lattice
/// nodes for orders 2-3. Geometry is affine per element: the map is built
/// from the corner vertices (element nodes 0..dim), which is exact for the
/// structured box meshes this project uses. Immutable after construction.
struct Mesh {
  int dim = 3;
  int order = 1;
  std::vector<Eigen::Vector3d> nodes;
  std::vector<std::vector<int>> elements;  // ReferenceElement lattice ordering

  struct BoundaryFacet {
    int element;      // owning element
    int local_facet;  // facet opposite corner vertex `local_facet`
    std::string tag;
  };
  std::vector<BoundaryFacet> boundary;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int verts_per_elem() const { return dim + 1; }

  /// Affine element Jacobian (dim x dim block; identity elsewhere).
  Eigen::Matrix3d jacobian(int element) const;
  double signed_volume(int element) const;
  double volume() const;

  /// Node ids (in reference-lattice order) lying on a boundary facet.
  std::vector<int> facet_nodes(const BoundaryFacet& f, const ReferenceElement& elem) const;

  /// Corner vertex ids of a facet of an element.
  std::vector<int> facet_corners(int element, int local_facet) const;
};

struct MappedBasis {
  Eigen::VectorXd values;
  Eigen::MatrixXd grads;  // physical-space gradients, rows = basis functions
  double detJ = 0.0;
};

/// Basis values and physical gradients of element `e` at reference point xi.
MappedBasis eval_mapped_basis(const Mesh& mesh, const ReferenceElement& elem, int e,
                              const Eigen::Vector3d& xi);

/// Structured box mesh: each cell splits into 2 triangles (2D) or 6
/// tetrahedra via the Kuhn split (3D). Boundary facets are tagged
/// x-min/x-max/y-min/y-max/z-min/z-max.
Mesh build_box_mesh(const std::vector<double>& extents, const std::vector<int>& divisions,
                    int dim, int order);

/// Legacy-VTK ASCII writer (UNSTRUCTURED_GRID; cell type 10 tets, 5 tris).
/// Optional point-data vector fields are (name, nodal values) pairs with
/// `ncomp` components per node.
void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<std::pair<std::string, Eigen::VectorXd>>& point_vectors = {},
               int ncomp = 3);

}  // namespace galpha::fem
