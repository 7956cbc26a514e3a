#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "geotri/curve.hpp"
#include "geotri/unfold.hpp"

namespace geotri {

// Refinement of the mesh along a set of curves: every input curve becomes a
// chain of refined-triangle sides, so complementary regions, areas, winding
// numbers and point location are exact combinatorial queries.
class CutComplex {
public:
  struct Tri {
    int base_face = -1;
    std::array<int, 3> nodes{-1, -1, -1};  // global node ids
    std::array<Vec2, 3> pos;               // in the base face chart
    double area = 0;
  };

  struct Side {
    // Undirected refined edge; boundary sides have tri1 < 0.
    int tri0 = -1, side0 = -1;
    int tri1 = -1, side1 = -1;
    int node_a = -1, node_b = -1;  // direction a->b matches (tri0, side0)
    int base_edge = -1;            // >= 0 when the side lies on a base mesh edge
    std::set<int> curves;          // input curves covering this side
  };

  static CutComplex build(const IntrinsicMesh& m, const std::vector<SurfaceCurve>& curves);

  const IntrinsicMesh& base() const { return *mesh_; }
  int tri_count() const { return static_cast<int>(tris_.size()); }
  const Tri& tri(int t) const { return tris_[t]; }
  int node_count() const { return static_cast<int>(node_pt_.size()); }
  const SurfacePoint& node_point(int n) const { return node_pt_[n]; }
  int side_count() const { return static_cast<int>(sides_.size()); }
  const Side& side(int s) const { return sides_[s]; }
  int tri_side(int t, int j) const { return tri_sides_[t][j]; }
  // Neighbor triangle across side j of tri t (-1 on mesh boundary).
  int neighbor(int t, int j) const;
  bool side_is_mesh_boundary(int t, int j) const;

  // Directed walk of curve k: (side id, +1 if traversed node_a->node_b).
  const std::vector<std::pair<int, int>>& curve_walk(int k) const { return walks_[k]; }

  // Refined triangle containing p (any if several); -1 if p is not found.
  int locate(const SurfacePoint& p) const;
  // All refined triangles having p on their closure.
  std::vector<int> locate_all(const SurfacePoint& p) const;

  struct Region {
    std::vector<int> tris;
    double area = 0;
    int euler = 0;
    bool is_disk = false;
    bool touches_mesh_boundary = false;
    // Closed walks of directed sides (side id, dir) with the region on the left.
    std::vector<std::vector<std::pair<int, int>>> boundary_loops;
  };
  struct RegionSet {
    std::vector<Region> regions;
    std::vector<int> region_of_tri;
  };
  // Complementary components after cutting along the given curves (mesh
  // boundary always cuts). Sorted by decreasing area, ties by smallest tri id.
  RegionSet regions(const std::vector<int>& wall_curves) const;
  // Same with an arbitrary side-level wall predicate (mesh boundary is
  // always a wall regardless).
  RegionSet regions_by_predicate(const std::function<bool(int side)>& wall) const;

  // Winding number of curve k around the point inside the disk made of
  // region_tris (must not lie on the curve). The curve must be closed and
  // contained in the disk.
  int winding_number(int curve_k, const SurfacePoint& p, const std::vector<int>& region_tris) const;
  // Same for an arbitrary closed walk of directed sides.
  int winding_number_walk(const std::vector<std::pair<int, int>>& walk, const SurfacePoint& p,
                          const std::vector<int>& region_tris) const;

  // Boundary walk converted to a closed SurfaceCurve on the base mesh.
  SurfaceCurve walk_curve(const std::vector<std::pair<int, int>>& walk) const;
  SurfacePoint side_point(int side, int which) const;  // which=0 -> node_a

  double node_pair_distance(int a, int b) const;

private:
  const IntrinsicMesh* mesh_ = nullptr;
  std::vector<SurfacePoint> node_pt_;
  std::vector<Tri> tris_;
  std::vector<Side> sides_;
  std::vector<std::array<int, 3>> tri_sides_;
  std::vector<std::vector<std::pair<int, int>>> walks_;
  std::vector<std::vector<int>> face_tris_;  // per base face

  friend class RegionMesh;
};

// A complementary region materialized as a standalone surface-with-boundary,
// with point transfer both ways. "X replaced by P" made literal.
class RegionMesh {
public:
  RegionMesh(std::shared_ptr<const CutComplex> cc, std::vector<int> region_tris);

  const IntrinsicMesh& mesh() const { return *mesh_; }
  const CutComplex& complex() const { return *cc_; }
  const std::vector<int>& tris() const { return tris_; }

  SurfacePoint to_region(const SurfacePoint& base_pt) const;
  SurfacePoint to_base(const SurfacePoint& region_pt) const;
  SurfaceCurve to_region(const SurfaceCurve& c) const;
  SurfaceCurve to_base(const SurfaceCurve& c) const;
  int base_face_of(int region_face) const;

private:
  std::shared_ptr<const CutComplex> cc_;
  std::vector<int> tris_;              // cut tris, index = region face id
  std::vector<int> region_face_of_tri_;  // -1 outside
  std::unique_ptr<IntrinsicMesh> mesh_;
};

} // namespace geotri
