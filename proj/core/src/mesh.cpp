#include "hpdg/mesh.hpp"

#include <stdexcept>
#include <string>

namespace hpdg {

CartesianMesh::CartesianMesh(double a, double b, int n) : a_(a), b_(b), n_(n) {
  if (n < 1) throw std::invalid_argument("CartesianMesh: need n >= 1, got " + std::to_string(n));
  if (!(b > a)) throw std::invalid_argument("CartesianMesh: empty interval, b must exceed a");
  h_ = (b - a) / n;

  faces_.reserve(static_cast<size_t>(num_interior_faces() + num_boundary_faces()));
  element_faces_.assign(static_cast<size_t>(num_elements()), {-1, -1, -1, -1});

  auto push = [&](Axis axis, int sign, int plus, int minus) {
    Face f;
    f.id = static_cast<int>(faces_.size());
    f.axis = axis;
    f.sign = sign;
    f.plus = plus;
    f.minus = minus;
    f.measure = h_;
    faces_.push_back(f);
    return f.id;
  };

  // x-normal faces: column fx in [0, n] of row ey separates (fx-1, ey) | (fx, ey).
  for (int ey = 0; ey < n_; ++ey) {
    for (int fx = 0; fx <= n_; ++fx) {
      if (fx == 0) {
        const int e = element_id(0, ey);
        element_faces_[e][0] = push(Axis::X, -1, e, -1);
      } else if (fx == n_) {
        const int e = element_id(n_ - 1, ey);
        element_faces_[e][1] = push(Axis::X, +1, e, -1);
      } else {
        const int el = element_id(fx - 1, ey);
        const int er = element_id(fx, ey);
        const int id = push(Axis::X, +1, el, er);
        element_faces_[el][1] = id;
        element_faces_[er][0] = id;
      }
    }
  }
  // y-normal faces: row fy in [0, n] of column ex separates (ex, fy-1) / (ex, fy).
  for (int fy = 0; fy <= n_; ++fy) {
    for (int ex = 0; ex < n_; ++ex) {
      if (fy == 0) {
        const int e = element_id(ex, 0);
        element_faces_[e][2] = push(Axis::Y, -1, e, -1);
      } else if (fy == n_) {
        const int e = element_id(ex, n_ - 1);
        element_faces_[e][3] = push(Axis::Y, +1, e, -1);
      } else {
        const int eb = element_id(ex, fy - 1);
        const int et = element_id(ex, fy);
        const int id = push(Axis::Y, +1, eb, et);
        element_faces_[eb][3] = id;
        element_faces_[et][2] = id;
      }
    }
  }
}

std::array<double, 2> CartesianMesh::element_origin(int e) const {
  const auto [ex, ey] = element_coords(e);
  return {a_ + ex * h_, a_ + ey * h_};
}

std::array<int, 4> CartesianMesh::element_faces(int e) const {
  if (e < 0 || e >= num_elements()) throw std::invalid_argument("element_faces: id out of range");
  return element_faces_[e];
}

std::vector<int> CartesianMesh::neighborhood_faces(int e) const {
  const auto [ex, ey] = element_coords(e);
  std::vector<int> out;
  out.reserve(12);
  // x-normal faces live at (row ey', column fx) with id = ey' * (n+1) + fx.
  for (int row = ey - 1; row <= ey + 1; ++row) {
    if (row < 0 || row >= n_) continue;
    for (int fx = ex; fx <= ex + 1; ++fx) out.push_back(row * (n_ + 1) + fx);
  }
  // y-normal faces are offset by the x-normal block and live at
  // (row fy, column ex') with id = fy * n + ex'.
  const int y_base = n_ * (n_ + 1);
  for (int fy = ey; fy <= ey + 1; ++fy) {
    for (int col = ex - 1; col <= ex + 1; ++col) {
      if (col < 0 || col >= n_) continue;
      out.push_back(y_base + fy * n_ + col);
    }
  }
  return out;
}

std::array<double, 2> CartesianMesh::vertex_position(int v) const {
  const auto [vx, vy] = vertex_coords(v);
  return {a_ + vx * h_, a_ + vy * h_};
}

bool CartesianMesh::vertex_on_boundary(int v) const {
  const auto [vx, vy] = vertex_coords(v);
  return vx == 0 || vx == n_ || vy == 0 || vy == n_;
}

std::vector<int> CartesianMesh::interior_vertices() const {
  std::vector<int> out;
  out.reserve(static_cast<size_t>(num_interior_vertices()));
  for (int vy = 1; vy < n_; ++vy)
    for (int vx = 1; vx < n_; ++vx) out.push_back(vertex_id(vx, vy));
  return out;
}

std::array<int, 4> CartesianMesh::vertex_patch(int v) const {
  if (v < 0 || v >= num_vertices()) throw std::invalid_argument("vertex_patch: id out of range");
  if (vertex_on_boundary(v))
    throw std::domain_error("vertex_patch: vertex " + std::to_string(v) + " lies on the boundary");
  const auto [vx, vy] = vertex_coords(v);
  return {element_id(vx - 1, vy - 1), element_id(vx, vy - 1), element_id(vx - 1, vy),
          element_id(vx, vy)};
}

}  // namespace hpdg
