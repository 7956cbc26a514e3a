#pragma once

#include <optional>
#include <vector>

#include "geotri/curve.hpp"
#include "geotri/steiner.hpp"
#include "geotri/unfold.hpp"

namespace geotri {

// Machine-checkable local-shortness witness: straight unfoldings across edge
// crossings and wedge angles at vertex pivots. A side blocked by the mesh
// boundary needs no angle bound.
struct GeodesicCertificate {
  double max_crossing_residual = 0;  // radians
  struct Pivot {
    SurfacePoint at;
    double ccw_angle = 0, cw_angle = 0;
    bool ccw_blocked = false, cw_blocked = false;
  };
  std::vector<Pivot> pivots;

  bool valid(double tol_angle) const {
    if (max_crossing_residual > tol_angle) return false;
    for (const auto& p : pivots) {
      if (!p.ccw_blocked && p.ccw_angle < M_PI - tol_angle) return false;
      if (!p.cw_blocked && p.cw_angle < M_PI - tol_angle) return false;
    }
    return true;
  }
};

struct GeodesicPath {
  SurfaceCurve curve;
  GeodesicCertificate cert;
  double length() const { return curve.length(); }
};

// Local straightening within the homotopy class (rel endpoints): funnel
// shortening across face strips plus rerouting around vertex pivots whose
// wedge angle is below pi. Runs until the certificate holds at tol_angle.
GeodesicPath straighten_path(const IntrinsicMesh& m, const SurfaceCurve& c,
                             int max_iter = 100000);

// Certificate recomputation for an existing polyline (no modification).
GeodesicCertificate certify_path(const IntrinsicMesh& m, const SurfaceCurve& c);

// Globally shortest path: Steiner-graph initialization + straightening.
GeodesicPath shortest_path(const IntrinsicMesh& m, const SteinerGraph& graph,
                           const SurfacePoint& a, const SurfacePoint& b);

struct OracleResult {
  double value = 0;
  double err_bound = 0;
};
// Independent Dijkstra upper bound with an explicit error bound; value is
// within err_bound of the true distance from above.
OracleResult oracle_distance(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b,
                             int n);

// All locally shortest paths of length <= L_max between a and b, enumerated
// over face strips up to a crossing cap (doubling up to 3 times). Sorted by
// length; contains every globally shortest path.
std::vector<GeodesicPath> all_geodesics_between(const IntrinsicMesh& m, const SurfacePoint& a,
                                                const SurfacePoint& b, double L_max,
                                                int cap_hint = 0);

// Shortest curve path-homotopic to c (endpoints fixed). On surfaces with
// boundary the result may run along the boundary. This is straighten_path
// plus the contract checks.
GeodesicPath shortest_homotopic(const IntrinsicMesh& m, const SurfaceCurve& c);

// Closed-curve variant: shortest cycle freely homotopic to the given closed
// curve, by basepoint rotation; returns a closed piecewise-geodesic curve.
GeodesicPath shorten_closed_curve(const IntrinsicMesh& m, const SurfaceCurve& c,
                                  int rounds = 24);

} // namespace geotri
