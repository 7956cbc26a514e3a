#pragma once

#include <memory>
#include <vector>

#include "geotri/cutcomplex.hpp"
#include "geotri/geodesic.hpp"

namespace geotri {

// Disk with piecewise-geodesic Jordan boundary, realized as a region of the
// mesh cut along its own boundary. Edges are oriented with the region on the
// left.
struct PolygonRegion {
  std::vector<GeodesicPath> edges;
  std::vector<SurfacePoint> vertices;  // initial points of the edges
  std::shared_ptr<const CutComplex> cc;
  std::vector<int> region_tris;
  double area = 0;
  bool is_disk = false;

  double perimeter() const {
    double p = 0;
    for (const auto& e : edges) p += e.length();
    return p;
  }
  SurfaceCurve boundary_curve(const IntrinsicMesh& m) const;
  std::shared_ptr<RegionMesh> make_region_mesh() const;
  bool contains(const IntrinsicMesh& m, const SurfacePoint& p) const;
  // Strictly inside: contained and not within eps of the boundary.
  bool contains_interior(const IntrinsicMesh& m, const SurfacePoint& p, double eps) const;
};

// Builds the polygon enclosed on the left of the concatenated edges.
PolygonRegion make_polygon(const IntrinsicMesh& m, std::vector<GeodesicPath> edges);

// Complementary components of a system of curves. Non-disk components are
// returned flagged, not rejected.
struct CutRegion {
  std::vector<int> tris;
  double area = 0;
  bool is_disk = false;
  bool touches_mesh_boundary = false;
  std::vector<SurfaceCurve> boundary_loops;
};
struct CutResult {
  std::shared_ptr<const CutComplex> cc;
  std::vector<CutRegion> regions;
};
CutResult cut_along_graph(const IntrinsicMesh& m, const std::vector<SurfaceCurve>& curves);

// Diameter upper bound of a set of refined triangles: exact on flat convex
// unfoldings, otherwise a sample net at spacing h plus Steiner distances.
struct DiameterBound {
  double value = 0;       // net maximum (upper-bounded pairwise distances)
  double upper = 0;       // value + 2 * h_used (+ oracle error)
  double h_used = 0;
};
DiameterBound region_diameter(const CutComplex& cc, const std::vector<int>& tris, double h_net);

struct MeshDiameter {
  double lower = 0, upper = 0;
};
MeshDiameter mesh_diameter_bounds(const IntrinsicMesh& m);

// Transit classification: some geodesic passes through p. On piecewise-flat
// surfaces this excludes cone points of angle < 2 pi and boundary vertices of
// angle < pi.
struct TransitWitness {
  bool transit = false;
  std::string reason;
  SurfaceCurve witness;  // a locally geodesic sub-curve through p when transit
};
TransitWitness is_transit_point(const IntrinsicMesh& m, const SurfacePoint& p);

// Winding number of a closed curve around p, measured inside the disk made
// of the whole mesh (or the given triangle subset of a prebuilt complex via
// CutComplex::winding_number).
int winding_number(const IntrinsicMesh& m, const SurfaceCurve& closed, const SurfacePoint& p);

// Maximal arclength runs (s0, s1, on_boundary as 0/1) of a curve lying on
// the mesh boundary.
std::vector<std::array<double, 3>> mesh_boundary_runs(const IntrinsicMesh& m,
                                                      const SurfaceCurve& c);

} // namespace geotri
