#pragma once

#include <vector>

#include "geotri/geodesic.hpp"
#include "geotri/regions.hpp"

namespace geotri {

// Contact structure of two curves: every maximal contact event with arclength
// intervals on both curves (degenerate intervals for point contacts).
struct CurveContacts {
  struct Event {
    double a0 = 0, a1 = 0;  // interval on curve a
    double b0 = 0, b1 = 0;  // matching interval on curve b (orientation kept)
    bool is_arc = false;
  };
  std::vector<Event> events;
  // Connected components of |a| ∩ |b| (merged by locus on b).
  int components = 0;
  bool empty() const { return events.empty(); }
  double first_a() const;
  double last_a() const;
};

CurveContacts curve_contacts(const IntrinsicMesh& m, const SurfaceCurve& a, const SurfaceCurve& b);

// Replace the sub-curve of `a` between arclength s0..s1 by the portion of
// `b` between the matching points (both must be geodesics through the same
// pair of points, so the exchange preserves length).
SurfaceCurve splice_between(const IntrinsicMesh& m, const SurfaceCurve& a, double s0, double s1,
                            const SurfaceCurve& b, double t0, double t1);

// Geodesics from p0 to p1 and p0 to p2 with connected intersections against
// the polygon edges (and against each other for the second output).
// Rejects bigons whose designated points include a vertex.
struct SuperfluousPairResult {
  GeodesicPath gamma1, gamma2;
};
SuperfluousPairResult remove_superfluous_pair(const IntrinsicMesh& m, const SteinerGraph& graph,
                                              const PolygonRegion& P, const SurfacePoint& p0,
                                              const SurfacePoint& p1, const SurfacePoint& p2);

// Single-path variant: a geodesic p -> q without superfluous intersections
// against the given edges.
GeodesicPath geodesic_without_superfluous(const IntrinsicMesh& m, const SteinerGraph& graph,
                                          const std::vector<GeodesicPath>& edges,
                                          const SurfacePoint& p, const SurfacePoint& q);
GeodesicPath remove_superfluous_from(const IntrinsicMesh& m, GeodesicPath path,
                                     const std::vector<GeodesicPath>& edges);

// Replacement geodesic with the same endpoints and length whose union with
// the system is a finite graph; pieces off the original lie on system curves.
GeodesicPath normalize_to_finite_graph(const IntrinsicMesh& m,
                                       const std::vector<GeodesicPath>& system,
                                       const GeodesicPath& gamma_star);

// Number of connected components of the intersection with each system curve.
std::vector<int> intersection_component_counts(const IntrinsicMesh& m, const GeodesicPath& g,
                                               const std::vector<GeodesicPath>& system);

} // namespace geotri
