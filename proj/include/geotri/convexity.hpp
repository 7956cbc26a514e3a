#pragma once

#include "geotri/context.hpp"
#include "geotri/splice.hpp"

namespace geotri {

// Metric ball used as the ambient disk of boundary-convexity checks.
struct DiskNeighborhood {
  SurfacePoint center;
  double radius = 0;
  std::shared_ptr<SteinerGraph> graph;
  std::vector<double> center_field;
  double diam_upper = 0;  // <= 2 * radius

  double dist_from_center(const SurfacePoint& p) const {
    return graph->field_at(center_field, p);
  }
  bool contains(const SurfacePoint& p, double slack = 0) const {
    return dist_from_center(p) <= radius + slack;
  }
};

// Builds B(center, radius); verifies no short loop through the center pinches
// the ball (which would make it a non-disk).
std::shared_ptr<DiskNeighborhood> make_disk_neighborhood(MeshContext& ctx,
                                                         const SurfacePoint& center,
                                                         double radius, int graph_n = 16);

// Numeric witness of the three boundary-convexity conditions.
struct BoundaryConvexCertificate {
  double perimeter = 0;
  double margin_lower = 0;  // d(K, boundary of U minus mesh boundary)
  double diam_U_upper = 0;
  double diam_X_lower = 0;
  struct Cond3 {
    double s0 = 0, s1 = 0;  // arclength interval on the boundary
    double arc_len = 0;
    double competitor_len = 0;
    bool ok = false;
  };
  std::vector<Cond3> cond3;
  bool cond1_ok = false, cond2_ok = false, cond3_ok = false;
  bool all_ok() const { return cond1_ok && cond2_ok && cond3_ok; }
};

struct CertifiedPolygon {
  PolygonRegion region;
  std::shared_ptr<DiskNeighborhood> ambient;
  BoundaryConvexCertificate cert;
};

struct ConvexityParams {
  double h_arc_div = 64;   // condition-(3) arcs per boundary length
  double tol_len = 0;      // 0 = mesh default
  bool throw_on_fail = true;
};

// Checks conditions (1)-(3) of boundary convexity for K against the ball U.
// Throws Condition1Failed/Condition2Failed/Condition3Failed when
// params.throw_on_fail, otherwise returns the certificate with flags.
BoundaryConvexCertificate certify_boundary_convex(MeshContext& ctx, const PolygonRegion& K,
                                                  const DiskNeighborhood& U,
                                                  const ConvexityParams& params = {});

// Complete convexity probe: every geodesic between net points stays inside.
struct CompleteConvexityResult {
  bool convex = false;
  SurfacePoint witness_a, witness_b;
  GeodesicPath escaping;  // a geodesic leaving K, when not convex
};
CompleteConvexityResult is_completely_convex(MeshContext& ctx, const PolygonRegion& K,
                                             const DiskNeighborhood& U, double h_net);

// Closures of interior components of K1 ∩ K2, each certified against the
// ambient of the larger-perimeter input; perimeters never exceed the smaller
// input perimeter.
std::vector<CertifiedPolygon> intersect_boundary_convex(MeshContext& ctx,
                                                        const CertifiedPolygon& K1,
                                                        const CertifiedPolygon& K2);

// Closures of the components of P minus a geodesic with endpoints outside
// P's interior, re-certified against P's ambient.
std::vector<CertifiedPolygon> split_by_geodesic(MeshContext& ctx, const CertifiedPolygon& P,
                                                const GeodesicPath& gamma);

// Complement-of-K region restricted to U, as a standalone surface (the
// ambient annulus of condition (3)).
std::shared_ptr<RegionMesh> annulus_region(MeshContext& ctx, const PolygonRegion& K,
                                           const DiskNeighborhood& U);

// Structure a region boundary walk into maximal geodesic arcs (polygon
// edges), splitting where the covering source curve changes, or at the given
// extra break points (typically the source polygons' vertices).
std::vector<GeodesicPath> structure_boundary(const IntrinsicMesh& m, const CutComplex& cc,
                                             const std::vector<std::pair<int, int>>& loop);
std::vector<GeodesicPath> structure_boundary(const IntrinsicMesh& m, const CutComplex& cc,
                                             const std::vector<std::pair<int, int>>& loop,
                                             const std::vector<SurfacePoint>& extra_breaks);

} // namespace geotri
