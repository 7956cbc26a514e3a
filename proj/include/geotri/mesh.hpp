#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geotri/geom2.hpp"
#include "geotri/tolerances.hpp"

namespace geotri {

// Raw mesh description prior to validation. Faces are corner triples over
// arbitrary labels; gluing is either inferred from shared labels or given
// explicitly (abstract gluings such as the flat torus need the latter).
struct MeshData {
  std::vector<std::array<double, 3>> positions;  // optional, may be empty
  std::vector<std::array<int, 3>> faces;
  // Explicit per-halfedge lengths, indexed 3*f+i for the side from corner i
  // to corner i+1. Empty entries (<=0) fall back to positions.
  std::vector<double> halfedge_lengths;
  // Explicit twin pairs (halfedge ids). When non-empty they replace label
  // matching entirely.
  std::vector<std::pair<int, int>> gluings;
};

// Compact piecewise-flat surface: triangle combinatorics plus intrinsic edge
// lengths. Halfedge h = 3f+i runs from corner i to corner (i+1)%3 of face f.
class IntrinsicMesh {
public:
  static IntrinsicMesh build(const MeshData& data, const Tolerances& tol = default_tolerances());

  int face_count() const { return n_faces_; }
  int halfedge_count() const { return 3 * n_faces_; }
  int vertex_count() const { return n_vertices_; }
  int edge_count() const { return static_cast<int>(edge_halfedge_.size()); }

  static int he_face(int h) { return h / 3; }
  static int he_side(int h) { return h % 3; }
  static int he_next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int he_prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  int twin(int h) const { return twin_[h]; }
  bool is_boundary_he(int h) const { return twin_[h] < 0; }

  double he_length(int h) const { return length_[h]; }
  int edge_of_he(int h) const { return edge_of_he_[h]; }
  int edge_halfedge(int e) const { return edge_halfedge_[e]; }  // canonical side
  double edge_length(int e) const { return length_[edge_halfedge_[e]]; }
  bool edge_is_boundary(int e) const { return twin_[edge_halfedge_[e]] < 0; }

  // Vertex classes (after gluing). he_tail/he_head give class ids.
  int he_tail(int h) const { return corner_vertex_[h]; }
  int he_head(int h) const { return corner_vertex_[he_next(h)]; }
  int corner_vertex(int f, int i) const { return corner_vertex_[3 * f + i]; }

  bool vertex_on_boundary(int v) const { return vertex_boundary_[v]; }
  // Total incident angle; for boundary vertices this is the surface-side angle.
  double vertex_angle(int v) const { return vertex_angle_[v]; }
  bool is_cone_vertex(int v) const { return !vertex_boundary_[v] && std::abs(vertex_angle_[v] - 2 * M_PI) > 1e-12; }
  // Outgoing halfedges in CCW order; for boundary vertices the fan starts at
  // the boundary halfedge.
  const std::vector<int>& vertex_halfedges(int v) const { return vertex_out_[v]; }

  const std::vector<std::vector<int>>& boundary_loops() const { return boundary_loops_; }
  bool is_closed() const { return boundary_loops_.empty(); }

  // Flat layout of face f: corner positions in the face's local chart.
  const std::array<Vec2, 3>& layout(int f) const { return layout_[f]; }
  double face_area(int f) const { return face_area_[f]; }
  double total_area() const { return total_area_; }
  double max_edge_length() const { return max_edge_; }
  double min_edge_length() const { return min_edge_; }
  double scale() const { return max_edge_; }
  double min_positive_cone_defect_angle() const { return min_angle_around_; }

  double tol_len() const { return tol_.tol_len(scale()); }
  double tol_area() const { return tol_.tol_area(total_area_); }
  double snap_eps() const { return tol_.snap_eps(scale()); }
  const Tolerances& tolerances() const { return tol_; }

  // Angle of corner i of face f (at that corner's vertex).
  double corner_angle(int f, int i) const { return corner_angle_[3 * f + i]; }

  // FNV-1a over the canonical mesh description; keys result files to meshes.
  std::string content_hash() const;

  // One line per edge: "edge_id face side length", the reference for sidecars.
  std::string edge_table() const;

private:
  int n_faces_ = 0;
  int n_vertices_ = 0;
  std::vector<int> twin_;
  std::vector<double> length_;
  std::vector<int> corner_vertex_;
  std::vector<int> edge_of_he_;
  std::vector<int> edge_halfedge_;
  std::vector<bool> vertex_boundary_;
  std::vector<double> vertex_angle_;
  std::vector<std::vector<int>> vertex_out_;
  std::vector<std::vector<int>> boundary_loops_;
  std::vector<std::array<Vec2, 3>> layout_;
  std::vector<double> corner_angle_;
  std::vector<double> face_area_;
  double total_area_ = 0;
  double max_edge_ = 0;
  double min_edge_ = 0;
  double min_angle_around_ = 2 * M_PI;
  Tolerances tol_;
};

// File loaders. OFF text plus optional intrinsic-lengths sidecar ("edge_id
// length" per line, ids per edge_table of the position-built mesh) and an
// optional identifications file ("glue fA iA fB iB" per line).
MeshData read_off(const std::string& path);
void apply_sidecar(MeshData& data, const IntrinsicMesh& reference, const std::string& path);
void apply_identifications(MeshData& data, const std::string& path);
IntrinsicMesh load_mesh(const std::string& off_path,
                        const std::optional<std::string>& sidecar = std::nullopt,
                        const std::optional<std::string>& identifications = std::nullopt,
                        const Tolerances& tol = default_tolerances());

} // namespace geotri
