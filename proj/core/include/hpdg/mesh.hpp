#pragma once

#include <array>
#include <vector>

namespace hpdg {

enum class Axis : int { X = 0, Y = 1 };

// Oriented mesh face. Interior faces point along +x or +y, from `plus` into
// `minus`: the face normal coincides with the outward normal of the plus
// element. Boundary faces keep only `plus` and carry the outward domain
// normal, so sign = -1 on the left/bottom boundary.
struct Face {
  int id = -1;
  Axis axis = Axis::X;   // normal direction
  int sign = +1;         // n_F = sign * e_axis
  int plus = -1;         // adjacent element the normal points out of
  int minus = -1;        // adjacent element the normal points into; -1 on the boundary
  double measure = 0.0;  // face length
  bool boundary() const { return minus < 0; }
};

// Uniform n x n Cartesian mesh of the square (a, b)^2. Elements and vertices
// are numbered lexicographically by (row, col) = (y, x); faces are numbered
// with all x-normal faces first, then all y-normal faces, each set in
// lexicographic order.
class CartesianMesh {
 public:
  CartesianMesh(double a, double b, int n);

  double a() const { return a_; }
  double b() const { return b_; }
  int n() const { return n_; }
  double h() const { return h_; }

  int num_elements() const { return n_ * n_; }
  int num_vertices() const { return (n_ + 1) * (n_ + 1); }
  int num_interior_faces() const { return 2 * n_ * (n_ - 1); }
  int num_boundary_faces() const { return 4 * n_; }
  const std::vector<Face>& faces() const { return faces_; }

  int element_id(int ex, int ey) const { return ey * n_ + ex; }
  std::array<int, 2> element_coords(int e) const { return {e % n_, e / n_}; }
  // Lower-left corner of an element.
  std::array<double, 2> element_origin(int e) const;
  // Face ids of an element in the order (-x, +x, -y, +y).
  std::array<int, 4> element_faces(int e) const;
  // Faces whose closure meets the closure of element e: its own four edges
  // plus the faces touching its corners (up to 12 in the interior).
  std::vector<int> neighborhood_faces(int e) const;

  int vertex_id(int vx, int vy) const { return vy * (n_ + 1) + vx; }
  std::array<int, 2> vertex_coords(int v) const { return {v % (n_ + 1), v / (n_ + 1)}; }
  std::array<double, 2> vertex_position(int v) const;
  bool vertex_on_boundary(int v) const;
  int num_interior_vertices() const { return (n_ - 1) * (n_ - 1); }
  std::vector<int> interior_vertices() const;

  // The 2x2 element patch around an interior vertex, lexicographic order.
  // Throws std::domain_error for boundary vertices.
  std::array<int, 4> vertex_patch(int v) const;

 private:
  double a_;
  double b_;
  int n_;
  double h_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 4>> element_faces_;
};

}  // namespace hpdg
