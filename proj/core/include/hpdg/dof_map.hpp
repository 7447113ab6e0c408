#pragma once

#include <array>
#include <vector>

#include "hpdg/gll.hpp"
#include "hpdg/mesh.hpp"
#include "hpdg/sparse.hpp"

namespace hpdg {

// Nodal discontinuous Q^p space on a Cartesian mesh. Every element carries a
// (p+1)^2 tensor grid of GLL nodes; dofs are element-local, so coincident
// node positions on shared edges carry independent dofs. The global GLL
// lattice (n*p+1 points per direction) identifies coincident dofs exactly by
// integer indexing.
//
// dof numbering: element-major, dof = e*(p+1)^2 + iy*(p+1) + ix.
class DofMap {
 public:
  DofMap(const CartesianMesh& mesh, int p);  // requires p >= 2

  const CartesianMesh& mesh() const { return *mesh_; }
  int p() const { return p_; }
  int nodes_1d() const { return p_ + 1; }
  int dofs_per_element() const { return (p_ + 1) * (p_ + 1); }
  int total_dofs() const { return mesh_->num_elements() * dofs_per_element(); }
  const QuadratureRule& gll() const { return gll_; }

  int global_dof(int element, int ix, int iy) const {
    return element * dofs_per_element() + iy * (p_ + 1) + ix;
  }
  // Inverse of global_dof: (element, ix, iy).
  std::array<int, 3> dof_location(int dof) const;
  // Physical position of a dof's node.
  std::array<double, 2> dof_position(int dof) const;

  // --- GLL lattice ------------------------------------------------------
  int lattice_points_1d() const { return mesh_->n() * p_ + 1; }
  int num_lattice_nodes() const { return lattice_points_1d() * lattice_points_1d(); }
  int lattice_node_of_dof(int dof) const { return dof_to_node_[dof]; }
  bool lattice_node_on_boundary(int node) const;
  int multiplicity(int node) const { return node_offsets_[node + 1] - node_offsets_[node]; }
  // Coincident dofs of a lattice node, ascending.
  const int* node_dofs_begin(int node) const { return node_dofs_.data() + node_offsets_[node]; }
  const int* node_dofs_end(int node) const { return node_dofs_.data() + node_offsets_[node + 1]; }

  // --- Non-conforming candidate dofs -------------------------------------
  // Dofs whose local node sits on its element's edge; ascending.
  const std::vector<int>& vb_dofs() const { return vb_dofs_; }
  bool is_vb_dof(int dof) const { return is_vb_[dof] != 0; }

  // --- Conforming subspace ------------------------------------------------
  // One coefficient per interior lattice node; dim = (n*p - 1)^2.
  int conforming_dofs() const { return conforming_dofs_; }
  int conforming_index(int lattice_node) const { return conforming_index_[lattice_node]; }
  // 0/1 scatter from conforming coefficients to DG coefficients.
  const SparseOperator& conforming_embedding() const { return embedding_; }

  // Nodal-averaging projection onto the conforming subspace: coincident values
  // are averaged, boundary-lattice values are zeroed. Idempotent, and
  // v - oswald(v) vanishes at all element-interior nodes.
  Vec oswald(const Vec& v) const;

  // Sparse basis of the kernel of the averaging projection: for each interior
  // lattice node with coincident dofs (d_0 < ... < d_{k-1}) the k-1 columns
  // e_{d_i} - e_{d_{i+1}}; for each boundary-lattice node every unit column.
  // Column count = total_dofs() - conforming_dofs().
  SparseOperator kernel_basis() const;

  // Piecewise-bilinear coarse space on the mesh vertices: sparse embedding
  // into conforming coefficients, one column per interior mesh vertex (hat
  // values at the GLL lattice points).
  SparseOperator coarse_embedding() const;

  // Conforming dofs strictly inside the 2x2-element patch of an interior mesh
  // vertex: (2p-1)^2 indices, ascending. Throws std::domain_error on boundary
  // vertices.
  std::vector<int> patch_conforming_dofs(int vertex) const;

 private:
  const CartesianMesh* mesh_;
  int p_;
  QuadratureRule gll_;
  std::vector<int> dof_to_node_;
  std::vector<int> node_offsets_;  // CSR offsets into node_dofs_
  std::vector<int> node_dofs_;
  std::vector<int> vb_dofs_;
  std::vector<char> is_vb_;
  std::vector<int> conforming_index_;
  int conforming_dofs_ = 0;
  SparseOperator embedding_;
};

// Piecewise-bilinear partition-of-unity weights for the patch of an interior
// vertex: one value per mesh vertex. The weight is 1 at the patch center and
// at patch-boundary vertices all of whose patch-boundary faces lie on the
// domain boundary, 0 at every other vertex.
std::vector<double> partition_of_unity(const CartesianMesh& mesh, int vertex);

// Evaluate a vertex-value (bilinear per element) field and its gradient at a
// reference point of an element.
double q1_eval(const CartesianMesh& mesh, const std::vector<double>& vertex_values, int element,
               double xhat, double yhat);
std::array<double, 2> q1_gradient(const CartesianMesh& mesh,
                                  const std::vector<double>& vertex_values, int element,
                                  double xhat, double yhat);

// Degree-p nodal interpolant of theta * z for a conforming z and a bilinear
// vertex field theta: returns conforming coefficients. Continuity of both
// factors keeps the product single-valued at shared lattice nodes.
Vec interpolate_product(const DofMap& dofmap, const std::vector<double>& theta_vertex_values,
                        const Vec& z_conforming);

}  // namespace hpdg
