#pragma once

#include <vector>

#include "geotri/curve.hpp"

namespace geotri {

// Orientation-preserving rigid motion of the plane.
struct Rigid2 {
  double c = 1, s = 0;  // rotation
  Vec2 t{0, 0};         // translation
  Vec2 apply(Vec2 p) const { return {c * p.x - s * p.y + t.x, s * p.x + c * p.y + t.y}; }
  Vec2 apply_dir(Vec2 d) const { return {c * d.x - s * d.y, s * d.x + c * d.y}; }
  Rigid2 then(const Rigid2& outer) const {  // outer ∘ this
    Rigid2 r;
    r.c = outer.c * c - outer.s * s;
    r.s = outer.s * c + outer.c * s;
    r.t = outer.apply(t);
    return r;
  }
  Rigid2 inverse() const {
    Rigid2 r;
    r.c = c; r.s = -s;
    r.t = {-(c * t.x + s * t.y), -(-s * t.x + c * t.y)};
    return r;
  }
  static Rigid2 from_pairs(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to);
};

// Map from the chart of face(twin(h)) into the chart of face(h), gluing the
// shared edge. h must be interior.
Rigid2 chart_transfer(const IntrinsicMesh& m, int h);

// A face strip unfolded into the chart of its first face. crossings[i] is the
// halfedge of faces[i] crossed into faces[i+1].
struct StripLayout {
  std::vector<int> faces;
  std::vector<int> crossings;
  std::vector<Rigid2> charts;  // chart of faces[i] -> plane of faces[0]

  // Unfolded portal segment for crossing i: images of tail/head of crossings[i].
  std::pair<Vec2, Vec2> portal(const IntrinsicMesh& m, int i) const;
};

StripLayout unfold_strip(const IntrinsicMesh& m, int f0, const std::vector<int>& crossings);

// Straight walk from a point in direction dir (unit, in the chart of face f).
struct RayTrace {
  enum class Stop { Length, Boundary, Vertex };
  Stop stop = Stop::Length;
  SurfaceCurve curve;
  double traced = 0;
  int hit_vertex = -1;
};
RayTrace trace_ray(const IntrinsicMesh& m, const SurfacePoint& start, int face, Vec2 dir,
                   double length);

// Shortest path through an ordered sequence of portals (left_i, right_i are
// the unfolded head/tail of the crossing halfedges). Nodes report, per
// portal, the crossing parameter along tail->head, and apex bends.
struct FunnelNode {
  Vec2 pos;
  int portal = -1;       // -1 for the two endpoints and for apex bends
  double t = 0;          // crossing parameter on the portal (tail->head)
  int apex_portal = -1;  // portal whose endpoint the path bends around
  bool apex_left = false;
};
struct FunnelPath {
  std::vector<FunnelNode> nodes;
  double length = 0;
};
FunnelPath funnel_shortest(const std::vector<std::pair<Vec2, Vec2>>& portals, Vec2 s, Vec2 t,
                           double eps);

} // namespace geotri
