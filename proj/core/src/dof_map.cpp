#include "hpdg/dof_map.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace hpdg {

DofMap::DofMap(const CartesianMesh& mesh, int p) : mesh_(&mesh), p_(p) {
  if (p < 2)
    throw std::invalid_argument(
        "DofMap: the space split needs element-interior nodes, so p >= 2 (got " +
        std::to_string(p) + ")");
  gll_ = gll_rule(p);

  const int per = dofs_per_element();
  const int lat = lattice_points_1d();
  const int ndofs = total_dofs();

  dof_to_node_.assign(static_cast<size_t>(ndofs), -1);
  std::vector<int> counts(static_cast<size_t>(num_lattice_nodes()), 0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto [ex, ey] = mesh.element_coords(e);
    for (int iy = 0; iy <= p_; ++iy)
      for (int ix = 0; ix <= p_; ++ix) {
        const int gx = ex * p_ + ix;
        const int gy = ey * p_ + iy;
        const int node = gy * lat + gx;
        dof_to_node_[static_cast<size_t>(e) * per + iy * (p_ + 1) + ix] = node;
        ++counts[node];
      }
  }
  node_offsets_.assign(static_cast<size_t>(num_lattice_nodes()) + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), node_offsets_.begin() + 1);
  node_dofs_.assign(static_cast<size_t>(ndofs), -1);
  std::vector<int> fill(node_offsets_.begin(), node_offsets_.end() - 1);
  for (int dof = 0; dof < ndofs; ++dof) node_dofs_[fill[dof_to_node_[dof]]++] = dof;
  // dof-major fill order already yields ascending dof lists per node.

  is_vb_.assign(static_cast<size_t>(ndofs), 0);
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int iy = 0; iy <= p_; ++iy)
      for (int ix = 0; ix <= p_; ++ix)
        if (ix == 0 || ix == p_ || iy == 0 || iy == p_)
          is_vb_[global_dof(e, ix, iy)] = 1;
  for (int dof = 0; dof < ndofs; ++dof)
    if (is_vb_[dof]) vb_dofs_.push_back(dof);

  conforming_index_.assign(static_cast<size_t>(num_lattice_nodes()), -1);
  int next = 0;
  for (int gy = 1; gy < lat - 1; ++gy)
    for (int gx = 1; gx < lat - 1; ++gx) conforming_index_[gy * lat + gx] = next++;
  conforming_dofs_ = next;

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(ndofs));
  for (int dof = 0; dof < ndofs; ++dof) {
    const int c = conforming_index_[dof_to_node_[dof]];
    if (c >= 0) trip.emplace_back(dof, c, 1.0);
  }
  embedding_ = SparseOperator::from_triplets(ndofs, conforming_dofs_, trip);
}

std::array<int, 3> DofMap::dof_location(int dof) const {
  const int per = dofs_per_element();
  const int e = dof / per;
  const int r = dof % per;
  return {e, r % (p_ + 1), r / (p_ + 1)};
}

std::array<double, 2> DofMap::dof_position(int dof) const {
  const auto [e, ix, iy] = dof_location(dof);
  const auto [x0, y0] = mesh_->element_origin(e);
  const double half = 0.5 * mesh_->h();
  return {x0 + half * (1.0 + gll_.nodes[ix]), y0 + half * (1.0 + gll_.nodes[iy])};
}

bool DofMap::lattice_node_on_boundary(int node) const {
  const int lat = lattice_points_1d();
  const int gx = node % lat;
  const int gy = node / lat;
  return gx == 0 || gx == lat - 1 || gy == 0 || gy == lat - 1;
}

Vec DofMap::oswald(const Vec& v) const {
  if (v.size() != total_dofs()) throw std::invalid_argument("oswald: size mismatch");
  Vec out(v.size());
  const int nn = num_lattice_nodes();
  for (int node = 0; node < nn; ++node) {
    const int* b = node_dofs_begin(node);
    const int* e = node_dofs_end(node);
    if (lattice_node_on_boundary(node)) {
      for (const int* d = b; d != e; ++d) out[*d] = 0.0;
      continue;
    }
    double sum = 0.0;
    for (const int* d = b; d != e; ++d) sum += v[*d];
    const double avg = sum / static_cast<double>(e - b);
    for (const int* d = b; d != e; ++d) out[*d] = avg;
  }
  return out;
}

SparseOperator DofMap::kernel_basis() const {
  std::vector<Triplet> trip;
  int col = 0;
  const int nn = num_lattice_nodes();
  for (int node = 0; node < nn; ++node) {
    const int* b = node_dofs_begin(node);
    const int* e = node_dofs_end(node);
    if (lattice_node_on_boundary(node)) {
      for (const int* d = b; d != e; ++d) {
        trip.emplace_back(*d, col, 1.0);
        ++col;
      }
    } else {
      for (const int* d = b; d + 1 != e; ++d) {
        trip.emplace_back(*d, col, 1.0);
        trip.emplace_back(*(d + 1), col, -1.0);
        ++col;
      }
    }
  }
  if (col != total_dofs() - conforming_dofs_)
    throw std::logic_error("kernel_basis: dimension bookkeeping failed");
  return SparseOperator::from_triplets(total_dofs(), col, trip);
}

SparseOperator DofMap::coarse_embedding() const {
  const auto& mesh = *mesh_;
  const int n = mesh.n();
  const int lat = lattice_points_1d();

  // 1D hat values at the lattice positions. Lattice point g sits in mesh cell
  // g / p at local GLL node g % p (endpoint convention: last point belongs to
  // the last cell). The hat centred at mesh vertex m is supported on cells
  // m-1 and m.
  std::vector<double> ref(static_cast<size_t>(p_) + 1);
  for (int i = 0; i <= p_; ++i) ref[i] = 0.5 * (1.0 + gll_.nodes[i]);  // in [0, 1]

  auto hat_value = [&](int m, int g) -> double {
    const int cell = (g == lat - 1) ? n - 1 : g / p_;
    const int node = (g == lat - 1) ? p_ : g % p_;
    const double t = ref[node];  // position within the cell
    if (cell == m - 1) return t;
    if (cell == m) return 1.0 - t;
    return 0.0;
  };

  std::vector<Triplet> trip;
  const auto interior = mesh.interior_vertices();
  for (size_t j = 0; j < interior.size(); ++j) {
    const auto [vx, vy] = mesh.vertex_coords(interior[j]);
    // support: lattice points with gx in ((vx-1)p, (vx+1)p), gy likewise
    for (int gy = (vy - 1) * p_; gy <= (vy + 1) * p_; ++gy) {
      if (gy <= 0 || gy >= lat - 1) continue;
      const double hy = hat_value(vy, gy);
      if (hy == 0.0) continue;
      for (int gx = (vx - 1) * p_; gx <= (vx + 1) * p_; ++gx) {
        if (gx <= 0 || gx >= lat - 1) continue;
        const double hx = hat_value(vx, gx);
        if (hx == 0.0) continue;
        trip.emplace_back(conforming_index_[gy * lat + gx], static_cast<int>(j), hx * hy);
      }
    }
  }
  return SparseOperator::from_triplets(conforming_dofs_, static_cast<int>(interior.size()), trip);
}

std::vector<int> DofMap::patch_conforming_dofs(int vertex) const {
  const auto& mesh = *mesh_;
  if (mesh.vertex_on_boundary(vertex))
    throw std::domain_error("patch_conforming_dofs: boundary vertex " + std::to_string(vertex));
  const auto [vx, vy] = mesh.vertex_coords(vertex);
  const int lat = lattice_points_1d();
  std::vector<int> out;
  out.reserve(static_cast<size_t>(2 * p_ - 1) * (2 * p_ - 1));
  for (int gy = (vy - 1) * p_ + 1; gy <= (vy + 1) * p_ - 1; ++gy)
    for (int gx = (vx - 1) * p_ + 1; gx <= (vx + 1) * p_ - 1; ++gx) {
      const int c = conforming_index_[gy * lat + gx];
      if (c < 0) throw std::logic_error("patch_conforming_dofs: unexpected boundary node");
      out.push_back(c);
    }
  return out;
}

std::vector<double> partition_of_unity(const CartesianMesh& mesh, int vertex) {
  if (mesh.vertex_on_boundary(vertex))
    throw std::domain_error("partition_of_unity: boundary vertex");
  const auto [cx, cy] = mesh.vertex_coords(vertex);
  const int n = mesh.n();
  std::vector<double> theta(static_cast<size_t>(mesh.num_vertices()), 0.0);
  theta[vertex] = 1.0;

  // Patch-boundary vertices get weight 1 exactly when every patch-boundary
  // face containing them lies on the domain boundary. A face of the patch
  // boundary lies on the domain boundary iff its vertices sit on the same
  // domain edge, which for the 8 surrounding vertices reduces to checking the
  // incident patch-boundary edges.
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int vx = cx + dx;
      const int vy = cy + dy;
      // Interior vertices of the patch boundary ring always exist because the
      // center is interior; enumerate the patch-boundary faces through (vx,vy).
      // Ring edges run along the square x = cx+-1, y = cy+-1.
      bool all_on_domain_boundary = true;
      int count = 0;
      auto consider = [&](int ax, int ay, int bx, int by) {
        // face from vertex (ax,ay) to (bx,by); both must be valid ring edges
        const bool on_domain = (ax == bx && (ax == 0 || ax == n)) || (ay == by && (ay == 0 || ay == n));
        ++count;
        if (!on_domain) all_on_domain_boundary = false;
      };
      if (dx != 0 && dy != 0) {
        // corner of the ring: two incident ring edges
        consider(vx, vy, vx, vy - dy);
        consider(vx, vy, vx - dx, vy);
      } else if (dx == 0) {
        // mid vertex of a horizontal ring edge pair (y = cy + dy)
        consider(vx - 1, vy, vx, vy);
        consider(vx, vy, vx + 1, vy);
      } else {
        // mid vertex of a vertical ring edge pair (x = cx + dx)
        consider(vx, vy - 1, vx, vy);
        consider(vx, vy, vx, vy + 1);
      }
      if (count > 0 && all_on_domain_boundary) theta[mesh.vertex_id(vx, vy)] = 1.0;
    }
  }
  return theta;
}

namespace {
std::array<int, 4> element_vertex_ids(const CartesianMesh& mesh, int element) {
  const auto [ex, ey] = mesh.element_coords(element);
  return {mesh.vertex_id(ex, ey), mesh.vertex_id(ex + 1, ey), mesh.vertex_id(ex, ey + 1),
          mesh.vertex_id(ex + 1, ey + 1)};
}
}  // namespace

double q1_eval(const CartesianMesh& mesh, const std::vector<double>& vertex_values, int element,
               double xhat, double yhat) {
  const auto v = element_vertex_ids(mesh, element);
  const double sx = 0.5 * (1.0 + xhat), sy = 0.5 * (1.0 + yhat);
  return vertex_values[v[0]] * (1 - sx) * (1 - sy) + vertex_values[v[1]] * sx * (1 - sy) +
         vertex_values[v[2]] * (1 - sx) * sy + vertex_values[v[3]] * sx * sy;
}

std::array<double, 2> q1_gradient(const CartesianMesh& mesh,
                                  const std::vector<double>& vertex_values, int element,
                                  double xhat, double yhat) {
  const auto v = element_vertex_ids(mesh, element);
  const double sx = 0.5 * (1.0 + xhat), sy = 0.5 * (1.0 + yhat);
  const double scale = 1.0 / mesh.h();  // d(sx)/dx = 1/h
  const double gx = (-vertex_values[v[0]] * (1 - sy) + vertex_values[v[1]] * (1 - sy) -
                     vertex_values[v[2]] * sy + vertex_values[v[3]] * sy) *
                    scale;
  const double gy = (-vertex_values[v[0]] * (1 - sx) - vertex_values[v[1]] * sx +
                     vertex_values[v[2]] * (1 - sx) + vertex_values[v[3]] * sx) *
                    scale;
  return {gx, gy};
}

Vec interpolate_product(const DofMap& dofmap, const std::vector<double>& theta_vertex_values,
                        const Vec& z_conforming) {
  const auto& mesh = dofmap.mesh();
  if (static_cast<int>(theta_vertex_values.size()) != mesh.num_vertices())
    throw std::invalid_argument("interpolate_product: vertex value count mismatch");
  if (z_conforming.size() != dofmap.conforming_dofs())
    throw std::invalid_argument("interpolate_product: conforming coefficient count mismatch");

  const int lat = dofmap.lattice_points_1d();
  const int n = mesh.n();
  const int p = dofmap.p();
  const auto& nodes = dofmap.gll().nodes;
  Vec out = Vec::Zero(dofmap.conforming_dofs());
  for (int gy = 1; gy < lat - 1; ++gy) {
    const int ey = std::min((gy == lat - 1) ? n - 1 : gy / p, n - 1);
    const int iy = gy - ey * p;
    for (int gx = 1; gx < lat - 1; ++gx) {
      const int ex = std::min((gx == lat - 1) ? n - 1 : gx / p, n - 1);
      const int ix = gx - ex * p;
      const int e = mesh.element_id(ex, ey);
      const double theta = q1_eval(mesh, theta_vertex_values, e, nodes[ix], nodes[iy]);
      const int c = dofmap.conforming_index(gy * lat + gx);
      out[c] = theta * z_conforming[c];
    }
  }
  return out;
}

}  // namespace hpdg
