#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "geotri/convexity.hpp"

namespace geotri {

struct PipelineParams {
  double epsilon = 0.5;
  uint64_t seed = 12345;
  double h_net = 0;      // 0: epsilon / 8
  double h_arc_div = 64;
  int steiner_n = 16;
  bool snapshots = false;

  double net_spacing() const { return h_net > 0 ? h_net : epsilon / 8; }
};

// Final triangle with all per-triangle evidence for the main theorem's
// conclusions.
struct TriangleElement {
  PolygonRegion region;
  std::shared_ptr<DiskNeighborhood> ambient;
  BoundaryConvexCertificate cert;
  std::vector<double> side_lengths;  // endpoint distances, one per edge
  double nondegeneracy_slack = 0;    // min triangle-inequality slack
  DiameterBound diameter;
  std::string provenance;            // stage that finalized it
};

struct StageStats {
  std::string name;
  int output_count = 0;
  double output_area = 0;
  double millis = 0;
};

struct TriangulationOutput {
  std::vector<TriangleElement> triangles;
  double epsilon = 0;
  double epsilon_effective = 0;
  std::vector<StageStats> stats;
};

// ---- Stages of the construction ----

// Small polygonal neighbourhood of x: diameter <= eps, boundary transit away
// from x; x is interior unless it lies on the mesh boundary.
PolygonRegion polygon_neighborhood(MeshContext& ctx, const SurfacePoint& x, double eps,
                                   uint64_t seed = 1);

// Fan of 3-edge polygons covering a neighbourhood of x; perimeters <= 3 eps.
struct FanCover {
  std::vector<PolygonRegion> triangles;
  PolygonRegion base_polygon;
  std::shared_ptr<DiskNeighborhood> ambient;
};
FanCover triangle_fan_cover(MeshContext& ctx, const SurfacePoint& x, double eps,
                            uint64_t seed = 1);

// Shortest closed curve winding around K inside U, as a polygon containing K.
PolygonRegion shortest_enclosing_curve(MeshContext& ctx, const PolygonRegion& K,
                                       const DiskNeighborhood& U);

// Absolutely convex polygon containing P, with certificates.
CertifiedPolygon absolutely_convex_hull(MeshContext& ctx, const PolygonRegion& P,
                                        const SurfacePoint& x, double eps);

// Selects the extremal (minimal enclosed region toward `toward`) geodesic
// among equal-length candidates.
GeodesicPath extremal_geodesic(MeshContext& ctx, const std::vector<GeodesicPath>& candidates,
                               const PolygonRegion& frame, const SurfacePoint& toward);

std::vector<CertifiedPolygon> cover_absolutely_convex(MeshContext& ctx,
                                                      const PipelineParams& params);
std::vector<CertifiedPolygon> refine_cover_to_finite_graph(MeshContext& ctx,
                                                           std::vector<CertifiedPolygon> cover);
std::vector<CertifiedPolygon> make_non_overlapping(MeshContext& ctx,
                                                   std::vector<CertifiedPolygon> cover);
std::vector<CertifiedPolygon> triangulate_polygon(MeshContext& ctx, const CertifiedPolygon& P);

// Bigon repair: non-degenerate triangles covering a bigon (or degenerate
// triangle), non-overlapping, new boundaries transit.
std::vector<TriangleElement> split_bigon_nondegenerate(MeshContext& ctx,
                                                       const CertifiedPolygon& B,
                                                       const PipelineParams& params,
                                                       int depth = 0);

using SnapshotSink = std::function<void(const std::string& stage,
                                        const std::vector<CertifiedPolygon>&)>;

TriangulationOutput triangulate_surface(const IntrinsicMesh& m, const PipelineParams& params,
                                        const SnapshotSink& snapshots = {});

// Reduced representation: merge consecutive edges whose concatenation is a
// geodesic; returns the certified polygon with possibly fewer edges.
CertifiedPolygon consolidate_polygon(MeshContext& ctx, const CertifiedPolygon& P);

// Side lengths (endpoint distances) and the minimal triangle-inequality
// slack of a 3-edge polygon.
struct TriangleMetrics {
  std::vector<double> sides;
  double slack = 0;
};
TriangleMetrics triangle_metrics(MeshContext& ctx, const PolygonRegion& T);

} // namespace geotri
