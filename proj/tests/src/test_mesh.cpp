#include "hpdg/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace {

using hpdg::Axis;
using hpdg::CartesianMesh;
using hpdg::Face;

TEST(Mesh, ReferenceGeometry) {
  const CartesianMesh mesh(-1.0, 1.0, 32);
  EXPECT_DOUBLE_EQ(mesh.h(), 0.0625);
  EXPECT_EQ(mesh.num_elements(), 1024);
  EXPECT_EQ(mesh.num_interior_faces(), 1984);
  EXPECT_EQ(mesh.num_boundary_faces(), 128);
  EXPECT_EQ(mesh.num_interior_vertices(), 961);
  EXPECT_EQ(static_cast<int>(mesh.faces().size()), 1984 + 128);
}

TEST(Mesh, SingleElement) {
  const CartesianMesh mesh(0.0, 1.0, 1);
  EXPECT_EQ(mesh.num_elements(), 1);
  EXPECT_EQ(mesh.num_interior_faces(), 0);
  EXPECT_EQ(mesh.num_boundary_faces(), 4);
  EXPECT_EQ(mesh.num_interior_vertices(), 0);
  double measure = 0.0;
  for (const auto& f : mesh.faces()) {
    EXPECT_TRUE(f.boundary());
    measure += f.measure;
  }
  EXPECT_DOUBLE_EQ(measure, 4.0);
}

TEST(Mesh, TwoByTwoCounts) {
  const CartesianMesh mesh(0.0, 1.0, 2);
  int interior = 0, boundary = 0;
  for (const auto& f : mesh.faces()) (f.boundary() ? boundary : interior)++;
  EXPECT_EQ(interior, 4);
  EXPECT_EQ(boundary, 8);
}

TEST(Mesh, InvalidArgumentsThrow) {
  EXPECT_THROW(CartesianMesh(0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(CartesianMesh(1.0, 1.0, 4), std::invalid_argument);
  EXPECT_THROW(CartesianMesh(2.0, -1.0, 4), std::invalid_argument);
}

TEST(Mesh, InteriorFaceConvention) {
  const CartesianMesh mesh(-1.0, 1.0, 4);
  for (const auto& f : mesh.faces()) {
    if (f.boundary()) continue;
    EXPECT_EQ(f.sign, +1);  // interior normals point along +x/+y
    EXPECT_NE(f.plus, f.minus);
    const auto pc = mesh.element_coords(f.plus);
    const auto mc = mesh.element_coords(f.minus);
    // the normal leaves the plus element: minus sits one step along the axis
    if (f.axis == Axis::X) {
      EXPECT_EQ(mc[0], pc[0] + 1);
      EXPECT_EQ(mc[1], pc[1]);
    } else {
      EXPECT_EQ(mc[0], pc[0]);
      EXPECT_EQ(mc[1], pc[1] + 1);
    }
    EXPECT_DOUBLE_EQ(f.measure, mesh.h());
  }
}

TEST(Mesh, BoundaryFaceOutwardNormal) {
  const int n = 4;
  const CartesianMesh mesh(-1.0, 1.0, n);
  for (const auto& f : mesh.faces()) {
    if (!f.boundary()) continue;
    const auto ec = mesh.element_coords(f.plus);
    if (f.axis == Axis::X) {
      EXPECT_TRUE(ec[0] == 0 || ec[0] == n - 1);
      EXPECT_EQ(f.sign, ec[0] == 0 ? -1 : +1);
    } else {
      EXPECT_TRUE(ec[1] == 0 || ec[1] == n - 1);
      EXPECT_EQ(f.sign, ec[1] == 0 ? -1 : +1);
    }
  }
}

TEST(Mesh, ElementFacesCoverBoundaryExactly) {
  const CartesianMesh mesh(0.0, 1.0, 3);
  std::vector<int> interior_seen(mesh.faces().size(), 0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto faces = mesh.element_faces(e);
    double measure = 0.0;
    for (int fid : faces) {
      const Face& f = mesh.faces()[fid];
      measure += f.measure;
      EXPECT_TRUE(f.plus == e || f.minus == e);
      if (!f.boundary()) interior_seen[fid]++;
    }
    EXPECT_DOUBLE_EQ(measure, 4.0 * mesh.h());
    // order convention: (-x, +x, -y, +y)
    EXPECT_EQ(mesh.faces()[faces[0]].axis, Axis::X);
    EXPECT_EQ(mesh.faces()[faces[1]].axis, Axis::X);
    EXPECT_EQ(mesh.faces()[faces[2]].axis, Axis::Y);
    EXPECT_EQ(mesh.faces()[faces[3]].axis, Axis::Y);
  }
  for (const auto& f : mesh.faces())
    if (!f.boundary()) EXPECT_EQ(interior_seen[f.id], 2);
}

TEST(Mesh, VertexPatches) {
  const CartesianMesh small(0.0, 1.0, 2);
  const auto center = small.interior_vertices();
  ASSERT_EQ(static_cast<int>(center.size()), 1);
  const auto patch = small.vertex_patch(center[0]);
  EXPECT_EQ(std::set<int>(patch.begin(), patch.end()), (std::set<int>{0, 1, 2, 3}));

  const CartesianMesh mesh(-1.0, 1.0, 32);
  const auto vertices = mesh.interior_vertices();
  ASSERT_EQ(static_cast<int>(vertices.size()), 961);
  for (int v : vertices) {
    const auto p = mesh.vertex_patch(v);
    EXPECT_EQ(std::set<int>(p.begin(), p.end()).size(), 4u);
  }
  // adjacent interior vertices share exactly two patch elements
  const auto c0 = mesh.vertex_coords(vertices[0]);
  const int right = mesh.vertex_id(c0[0] + 1, c0[1]);
  const auto p0 = mesh.vertex_patch(vertices[0]);
  const auto p1 = mesh.vertex_patch(right);
  std::set<int> s0(p0.begin(), p0.end()), shared;
  for (int e : p1)
    if (s0.count(e)) shared.insert(e);
  EXPECT_EQ(shared.size(), 2u);
}

TEST(Mesh, BoundaryVertexPatchThrows) {
  const CartesianMesh mesh(0.0, 1.0, 4);
  EXPECT_THROW(mesh.vertex_patch(mesh.vertex_id(0, 2)), std::domain_error);
  EXPECT_THROW(mesh.vertex_patch(mesh.vertex_id(4, 4)), std::domain_error);
}

TEST(Mesh, ElementsBelongToAtMostFourPatches) {
  const CartesianMesh mesh(0.0, 1.0, 5);
  std::vector<int> count(mesh.num_elements(), 0);
  for (int v : mesh.interior_vertices())
    for (int e : mesh.vertex_patch(v)) count[e]++;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    EXPECT_LE(count[e], 4);
    EXPECT_GE(count[e], 1);
  }
}

TEST(Mesh, NeighborhoodFaces) {
  const CartesianMesh mesh(0.0, 1.0, 4);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto hood = mesh.neighborhood_faces(e);
    EXPECT_LE(static_cast<int>(hood.size()), 12);
    // must contain the element's own four faces
    for (int fid : mesh.element_faces(e))
      EXPECT_NE(std::find(hood.begin(), hood.end(), fid), hood.end());
    // no duplicates
    std::set<int> unique(hood.begin(), hood.end());
    EXPECT_EQ(unique.size(), hood.size());
  }
  // an interior element of a 4x4 mesh touches exactly 12 faces
  const int center = mesh.element_id(1, 1);
  EXPECT_EQ(static_cast<int>(mesh.neighborhood_faces(center).size()), 12);
  // a corner element touches 8 (its own 4 plus 2 per adjacent neighbor pair)
  EXPECT_EQ(static_cast<int>(mesh.neighborhood_faces(mesh.element_id(0, 0)).size()), 8);
}

TEST(Mesh, GeometryAccessors) {
  const CartesianMesh mesh(-1.0, 1.0, 4);
  const auto origin = mesh.element_origin(mesh.element_id(2, 1));
  EXPECT_DOUBLE_EQ(origin[0], 0.0);
  EXPECT_DOUBLE_EQ(origin[1], -0.5);
  const auto vp = mesh.vertex_position(mesh.vertex_id(2, 3));
  EXPECT_DOUBLE_EQ(vp[0], 0.0);
  EXPECT_DOUBLE_EQ(vp[1], 0.5);
  EXPECT_TRUE(mesh.vertex_on_boundary(mesh.vertex_id(0, 1)));
  EXPECT_FALSE(mesh.vertex_on_boundary(mesh.vertex_id(2, 2)));
}

}  // namespace
