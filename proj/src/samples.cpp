#include "geotri/samples.hpp"

#include <cmath>

namespace geotri {

namespace {
MeshData grid_quad(double x0, double y0, double x1, double y1) {
  MeshData d;
  d.positions = {{x0, y0, 0}, {x1, y0, 0}, {x1, y1, 0}, {x0, y1, 0}};
  d.faces = {{0, 1, 2}, {0, 2, 3}};
  return d;
}
}  // namespace

IntrinsicMesh sample_square(double side) {
  return IntrinsicMesh::build(grid_quad(0, 0, side, side));
}

IntrinsicMesh sample_cube() {
  MeshData d;
  d.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                 {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  // Outward-oriented faces, each quad split by a diagonal.
  d.faces = {
      {0, 2, 1}, {0, 3, 2},  // bottom (z=0), seen from below
      {4, 5, 6}, {4, 6, 7},  // top
      {0, 1, 5}, {0, 5, 4},  // y=0
      {1, 2, 6}, {1, 6, 5},  // x=1
      {2, 3, 7}, {2, 7, 6},  // y=1
      {3, 0, 4}, {3, 4, 7},  // x=0
  };
  return IntrinsicMesh::build(d);
}

IntrinsicMesh sample_torus() {
  MeshData d;
  d.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  d.faces = {{0, 1, 2}, {2, 3, 0}};
  // f0 sides: (0,1)=bottom, (1,2)=right, (2,0)=diag
  // f1 sides: (2,3)=top, (3,0)=left, (0,2)=diag
  d.gluings = {
      {3 * 0 + 2, 3 * 1 + 2},  // diagonal to itself across the two faces
      {3 * 0 + 0, 3 * 1 + 0},  // bottom ~ top
      {3 * 0 + 1, 3 * 1 + 1},  // right ~ left
  };
  d.halfedge_lengths = {1, 1, std::sqrt(2.0), 1, 1, std::sqrt(2.0)};
  return IntrinsicMesh::build(d);
}

IntrinsicMesh sample_pillow() {
  MeshData d;
  d.positions = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  // Front split along diagonal 0-2, back along diagonal 1-3; label matching
  // glues the boundary of the two squares.
  d.faces = {
      {0, 1, 2}, {0, 2, 3},  // front
      {1, 0, 3}, {1, 3, 2},  // back
  };
  return IntrinsicMesh::build(d);
}

IntrinsicMesh sample_saddle() {
  MeshData d;
  const int k = 5;
  d.positions.resize(k + 1);
  d.positions[0] = {0, 0, 0};  // center; positions of the ring are fake
  for (int i = 1; i <= k; i++) d.positions[i] = {static_cast<double>(i), 0, 0};
  for (int i = 0; i < k; i++) d.faces.push_back({0, i + 1, (i + 1) % k + 1});
  d.halfedge_lengths.assign(3 * k, 0);
  for (int i = 0; i < k; i++) {
    d.halfedge_lengths[3 * i + 0] = 1;                  // center -> ring
    d.halfedge_lengths[3 * i + 1] = std::sqrt(2.0);     // ring edge
    d.halfedge_lengths[3 * i + 2] = 1;                  // ring -> center
  }
  return IntrinsicMesh::build(d);
}

IntrinsicMesh sample_square_annulus(double hole) {
  double a = (1 - hole) / 2, b = a + hole;
  MeshData d;
  d.positions = {
      {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
      {a, a, 0}, {b, a, 0}, {b, b, 0}, {a, b, 0},
  };
  d.faces = {
      {0, 1, 5}, {0, 5, 4}, {1, 2, 6}, {1, 6, 5},
      {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7},
  };
  return IntrinsicMesh::build(d);
}

IntrinsicMesh sample_half_square() {
  MeshData d;
  d.positions = {{0, 0, 0}, {1, 0, 0}, {1, 0.5, 0}, {0, 0.5, 0}};
  d.faces = {{0, 1, 2}, {0, 2, 3}};
  return IntrinsicMesh::build(d);
}

} // namespace geotri
