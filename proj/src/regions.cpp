#include "geotri/regions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

SurfaceCurve PolygonRegion::boundary_curve(const IntrinsicMesh& m) const {
  SurfaceCurve c = edges[0].curve;
  for (size_t i = 1; i < edges.size(); i++)
    c = c.concatenated(m, edges[i].curve, 16 * m.snap_eps());
  return c;
}

std::shared_ptr<RegionMesh> PolygonRegion::make_region_mesh() const {
  return std::make_shared<RegionMesh>(cc, region_tris);
}

bool PolygonRegion::contains(const IntrinsicMesh& m, const SurfacePoint& p) const {
  (void)m;
  std::set<int> in(region_tris.begin(), region_tris.end());
  for (int t : cc->locate_all(p))
    if (in.count(t)) return true;
  return false;
}

bool PolygonRegion::contains_interior(const IntrinsicMesh& m, const SurfacePoint& p,
                                      double eps) const {
  std::set<int> in(region_tris.begin(), region_tris.end());
  auto at = cc->locate_all(p);
  if (at.empty()) return false;
  for (int t : at)
    if (!in.count(t)) return false;
  // Not within eps of any boundary side.
  for (int t : at) {
    const auto& T = cc->tri(t);
    Vec2 pos = pos_in_face(m, p, T.base_face);
    for (int j = 0; j < 3; j++) {
      int sid = cc->tri_side(t, j);
      const auto& s = cc->side(sid);
      bool wall = s.tri1 < 0 || !s.curves.empty();
      if (!wall) continue;
      if (point_segment_dist(T.pos[j], T.pos[(j + 1) % 3], pos) <= eps) return false;
    }
  }
  return true;
}

PolygonRegion make_polygon(const IntrinsicMesh& m, std::vector<GeodesicPath> edges) {
  PolygonRegion P;
  P.edges = std::move(edges);
  if (P.edges.empty()) throw Error("make_polygon: no edges");
  for (const auto& e : P.edges) P.vertices.push_back(e.curve.front());
  SurfaceCurve boundary = P.edges[0].curve;
  for (size_t i = 1; i < P.edges.size(); i++)
    boundary = boundary.concatenated(m, P.edges[i].curve, 16 * m.snap_eps());
  if (!boundary.is_closed(m, 16 * m.snap_eps()))
    throw Error("make_polygon: boundary does not close");
  auto cc = std::make_shared<CutComplex>(CutComplex::build(m, {boundary}));
  auto rs = cc->regions({0});
  // The enclosed region lies on the left of the directed boundary walk.
  const auto& walk = cc->curve_walk(0);
  if (walk.empty()) throw Error("make_polygon: degenerate boundary");
  int rid = -1;
  for (auto& [sid, dir] : walk) {
    const auto& s = cc->side(sid);
    int left = dir > 0 ? s.tri0 : s.tri1;
    if (left >= 0) {
      rid = rs.region_of_tri[left];
      break;
    }
  }
  if (rid < 0) throw Error("make_polygon: no region on the left of the boundary");
  P.cc = cc;
  P.region_tris = rs.regions[rid].tris;
  P.area = rs.regions[rid].area;
  P.is_disk = rs.regions[rid].is_disk;
  return P;
}

CutResult cut_along_graph(const IntrinsicMesh& m, const std::vector<SurfaceCurve>& curves) {
  CutResult out;
  auto cc = std::make_shared<CutComplex>(CutComplex::build(m, curves));
  std::vector<int> walls;
  for (size_t i = 0; i < curves.size(); i++) walls.push_back(static_cast<int>(i));
  auto rs = cc->regions(walls);
  for (auto& r : rs.regions) {
    CutRegion cr;
    cr.tris = r.tris;
    cr.area = r.area;
    cr.is_disk = r.is_disk;
    cr.touches_mesh_boundary = r.touches_mesh_boundary;
    for (auto& loop : r.boundary_loops) cr.boundary_loops.push_back(cc->walk_curve(loop));
    out.regions.push_back(std::move(cr));
  }
  out.cc = cc;
  return out;
}

namespace {

// Attempt a global flat unfolding of the triangle set; returns hull points
// when the set unfolds consistently to a convex planar region.
bool flat_convex_unfolding(const CutComplex& cc, const std::vector<int>& tris,
                           std::vector<Vec2>& hull) {
  const auto& m = cc.base();
  std::set<int> in(tris.begin(), tris.end());
  std::map<int, Rigid2> chart;
  std::vector<int> stack{tris[0]};
  chart[tris[0]] = Rigid2{};
  std::vector<std::array<Vec2, 3>> placed;
  double eps = 64 * m.snap_eps();
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    const auto& T = cc.tri(t);
    std::array<Vec2, 3> pos;
    for (int j = 0; j < 3; j++) pos[j] = chart[t].apply(T.pos[j]);
    placed.push_back(pos);
    for (int j = 0; j < 3; j++) {
      int sid = cc.tri_side(t, j);
      const auto& s = cc.side(sid);
      int n = (s.tri0 == t && s.side0 == j) ? s.tri1 : s.tri0;
      int nj = (s.tri0 == t && s.side0 == j) ? s.side1 : s.side0;
      if (n < 0 || !in.count(n)) continue;
      const auto& TN = cc.tri(n);
      // Map neighbor chart so the shared side coincides (reversed).
      Rigid2 r = Rigid2::from_pairs(TN.pos[nj], TN.pos[(nj + 1) % 3], pos[(j + 1) % 3], pos[j]);
      auto it = chart.find(n);
      if (it == chart.end()) {
        chart[n] = r;
        stack.push_back(n);
      } else {
        // Consistency: existing chart must match (flat around all vertices).
        Vec2 p1 = it->second.apply(TN.pos[nj]);
        Vec2 p2 = r.apply(TN.pos[nj]);
        if (dist(p1, p2) > eps) return false;
      }
    }
  }
  // Collect points and check convex-hull coverage: the union must equal its
  // hull (no reflex pockets), tested by area comparison.
  std::vector<Vec2> pts;
  double area = 0;
  for (auto& tri : placed) {
    for (auto& p : tri) pts.push_back(p);
    area += 0.5 * orient2d(tri[0], tri[1], tri[2]);
  }
  // Monotone-chain hull.
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](Vec2 a, Vec2 b) { return dist(a, b) < 1e-12; }),
            pts.end());
  if (pts.size() < 3) return false;
  std::vector<Vec2> lo, hi2;
  for (auto& p : pts) {
    while (lo.size() >= 2 && orient2d(lo[lo.size() - 2], lo.back(), p) <= 0) lo.pop_back();
    lo.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (hi2.size() >= 2 && orient2d(hi2[hi2.size() - 2], hi2.back(), *it) <= 0) hi2.pop_back();
    hi2.push_back(*it);
  }
  hull.assign(lo.begin(), lo.end() - 1);
  hull.insert(hull.end(), hi2.begin(), hi2.end() - 1);
  double hull_area = 0;
  for (size_t i = 1; i + 1 < hull.size(); i++)
    hull_area += 0.5 * orient2d(hull[0], hull[i], hull[i + 1]);
  return std::abs(hull_area - area) <= 1e-7 * std::max(1.0, hull_area);
}

} // namespace

DiameterBound region_diameter(const CutComplex& cc, const std::vector<int>& tris, double h_net) {
  const auto& m = cc.base();
  DiameterBound out;
  out.h_used = h_net;
  std::vector<Vec2> hull;
  if (flat_convex_unfolding(cc, tris, hull)) {
    double best = 0;
    for (size_t i = 0; i < hull.size(); i++)
      for (size_t j = i + 1; j < hull.size(); j++) best = std::max(best, dist(hull[i], hull[j]));
    out.value = best;
    out.upper = best;  // exact on flat convex regions
    out.h_used = 0;
    return out;
  }
  // Sample net over the triangles at spacing h.
  std::vector<SurfacePoint> samples;
  for (int t : tris) {
    const auto& T = cc.tri(t);
    double longest = 0;
    for (int j = 0; j < 3; j++) longest = std::max(longest, dist(T.pos[j], T.pos[(j + 1) % 3]));
    int k = std::max(1, static_cast<int>(std::ceil(longest / h_net)));
    k = std::min(k, 24);
    for (int i = 0; i <= k; i++)
      for (int j = 0; i + j <= k; j++) {
        double b0 = static_cast<double>(i) / k, b1 = static_cast<double>(j) / k;
        Vec2 pos = T.pos[0] * b0 + T.pos[1] * b1 + T.pos[2] * (1 - b0 - b1);
        samples.push_back(point_from_pos(m, T.base_face, pos));
      }
    out.h_used = std::max(out.h_used, longest / k);
  }
  // Cap the net; adjust the reported spacing accordingly.
  const size_t cap = 400;
  if (samples.size() > cap) {
    size_t stride = (samples.size() + cap - 1) / cap;
    std::vector<SurfacePoint> dec;
    for (size_t i = 0; i < samples.size(); i += stride) dec.push_back(samples[i]);
    out.h_used *= std::sqrt(static_cast<double>(stride));
    samples = std::move(dec);
  }
  SteinerGraph g(m, 16);
  double best = 0, err = 0;
  for (const auto& s : samples) {
    auto field = g.distance_field({s});
    for (const auto& q : samples) {
      double d = g.field_at(field, q);
      if (d > best) best = d;
    }
  }
  err = g.spacing() * 8;
  out.value = best;
  out.upper = best + 2 * out.h_used + err;
  return out;
}

MeshDiameter mesh_diameter_bounds(const IntrinsicMesh& m) {
  SteinerGraph g(m, 16);
  // All-pairs over the graph nodes themselves.
  double best = 0;
  int N = g.node_count();
  int best_i = -1, best_j = -1;
  for (int i = 0; i < N; i++) {
    auto field = g.distance_field({g.node_point(i)});
    for (int j = 0; j < N; j++)
      if (field[j] < 1e299 && field[j] > best) {
        best = field[j];
        best_i = i;
        best_j = j;
      }
  }
  // Lower bound: the witness pair's graph distance minus its error bound.
  double err = 2 * g.spacing() * 8;
  if (best_i >= 0) err = g.shortest(g.node_point(best_i), g.node_point(best_j)).err_bound;
  // Dispersion of graph nodes: every face point is within the face inradius
  // plus half a spacing of some node.
  double disp = 0;
  for (int f = 0; f < m.face_count(); f++) {
    const auto& L = m.layout(f);
    double per = dist(L[0], L[1]) + dist(L[1], L[2]) + dist(L[2], L[0]);
    double inradius = 2 * m.face_area(f) / per;
    disp = std::max(disp, inradius + g.spacing() / 2);
  }
  MeshDiameter out;
  out.lower = std::max(0.0, best - err);
  out.upper = best + 2 * disp;
  return out;
}

TransitWitness is_transit_point(const IntrinsicMesh& m, const SurfacePoint& p) {
  TransitWitness out;
  double step = 0.2 * m.min_edge_length();
  switch (p.kind) {
    case SurfacePoint::Kind::Face: {
      out.transit = true;
      out.reason = "interior point of a face";
      Vec2 d{1, 0};
      auto fwd = trace_ray(m, p, p.id, d, step);
      auto bwd = trace_ray(m, p, p.id, d * -1.0, step);
      out.witness = bwd.curve.reversed().concatenated(m, fwd.curve, 16 * m.snap_eps());
      return out;
    }
    case SurfacePoint::Kind::Edge: {
      int h = m.edge_halfedge(p.id);
      if (m.twin(h) < 0) {
        out.transit = true;
        out.reason = "interior point of a boundary edge (the edge is a geodesic)";
        double t0 = std::max(0.0, p.t - step / m.edge_length(p.id));
        double t1 = std::min(1.0, p.t + step / m.edge_length(p.id));
        SurfaceCurve w(m, {SurfacePoint::edge(p.id, t0), SurfacePoint::edge(p.id, t1)},
                       {IntrinsicMesh::he_face(h)});
        out.witness = w;
        return out;
      }
      out.transit = true;
      out.reason = "interior point of an interior edge";
      int f = IntrinsicMesh::he_face(h);
      Vec2 pos = pos_in_face(m, p, f);
      int j = IntrinsicMesh::he_side(h);
      const auto& L = m.layout(f);
      Vec2 along = (L[(j + 1) % 3] - L[j]).normalized();
      auto fwd = trace_ray(m, p, f, along, step);
      auto bwd = trace_ray(m, p, f, along * -1.0, step);
      (void)pos;
      out.witness = bwd.curve.reversed().concatenated(m, fwd.curve, 16 * m.snap_eps());
      return out;
    }
    case SurfacePoint::Kind::Vertex: {
      double theta = m.vertex_angle(p.id);
      if (m.vertex_on_boundary(p.id)) {
        if (theta >= M_PI - 1e-12) {
          out.transit = true;
          out.reason = "boundary vertex with angle >= pi (boundary path is locally shortest)";
          // Witness: short boundary sub-path through p.
          const auto& fan = m.vertex_halfedges(p.id);
          int h_out = -1, h_in = -1;
          for (int h : fan) {
            if (m.twin(h) < 0) h_out = h;
            if (m.twin(IntrinsicMesh::he_prev(h)) < 0) h_in = IntrinsicMesh::he_prev(h);
          }
          if (h_out >= 0 && h_in >= 0) {
            int e_out = m.edge_of_he(h_out), e_in = m.edge_of_he(h_in);
            double t_out = (m.edge_halfedge(e_out) == h_out)
                               ? step / m.edge_length(e_out)
                               : 1 - step / m.edge_length(e_out);
            double t_in = (m.edge_halfedge(e_in) == h_in) ? 1 - step / m.edge_length(e_in)
                                                          : step / m.edge_length(e_in);
            std::vector<SurfacePoint> pts{SurfacePoint::edge(e_in, t_in),
                                          SurfacePoint::vertex(p.id, h_out),
                                          SurfacePoint::edge(e_out, t_out)};
            out.witness = SurfaceCurve(
                m, pts, {IntrinsicMesh::he_face(h_in), IntrinsicMesh::he_face(h_out)});
          }
        } else {
          out.transit = false;
          out.reason = "boundary vertex with angle < pi";
        }
        return out;
      }
      if (theta < 2 * M_PI - 1e-12) {
        out.transit = false;
        out.reason = "cone point with angle < 2 pi (no side can reach pi on both sides)";
        return out;
      }
      out.transit = true;
      out.reason = "cone point with angle >= 2 pi (a direction splits it into two parts >= pi)";
      // Build a witness: pick an outgoing direction, walk the fan to the
      // direction at angle pi on one side, and trace both rays.
      const auto& fan = m.vertex_halfedges(p.id);
      int slot = fan[0];
      int f = IntrinsicMesh::he_face(slot), i = IntrinsicMesh::he_side(slot);
      const auto& L = m.layout(f);
      Vec2 d0 = (L[(i + 1) % 3] - L[i]).normalized();
      // Walk CW accumulating pi starting from d0.
      double remaining = M_PI;
      int c = slot;
      Vec2 dir_cur = d0;
      int guard = 0;
      while (true) {
        if (++guard > 4 * m.halfedge_count()) throw Error("transit witness walk stuck");
        int cf = IntrinsicMesh::he_face(c), ci = IntrinsicMesh::he_side(c);
        const auto& CL = m.layout(cf);
        Vec2 spoke_cw = CL[(ci + 1) % 3] - CL[ci];
        double to_exit = std::fmod(dir_cur.angle() - spoke_cw.angle() + 4 * M_PI, 2 * M_PI);
        if (remaining <= to_exit - 1e-12) {
          Vec2 d_here = rotate(dir_cur, -remaining);
          auto ray1 = trace_ray(m, SurfacePoint::vertex(p.id, c), cf, d_here, step);
          auto ray0 = trace_ray(m, SurfacePoint::vertex(p.id, slot), f, d0, step);
          out.witness = ray1.curve.reversed().concatenated(m, ray0.curve, 16 * m.snap_eps());
          break;
        }
        remaining -= to_exit;
        int tw = m.twin(c);
        if (tw < 0) throw Error("transit witness: unexpected boundary");
        int jg = IntrinsicMesh::he_side(tw), gg = IntrinsicMesh::he_face(tw);
        const auto& Lg = m.layout(gg);
        c = IntrinsicMesh::he_next(tw);
        dir_cur = Lg[jg] - Lg[(jg + 1) % 3];
      }
      return out;
    }
  }
  return out;
}

std::vector<std::array<double, 3>> mesh_boundary_runs(const IntrinsicMesh& m,
                                                      const SurfaceCurve& c) {
  std::vector<std::array<double, 3>> runs;  // (s0, s1, on_boundary)
  double eps = m.snap_eps();
  double acc = 0;
  for (int i = 0; i < c.segment_count(); i++) {
    int f = c.segment_face(i);
    Vec2 a = pos_in_face(m, c.point(i), f);
    Vec2 b = pos_in_face(m, c.point(i + 1), f);
    const auto& L = m.layout(f);
    bool on_b = false;
    for (int j = 0; j < 3; j++) {
      if (m.twin(3 * f + j) >= 0) continue;
      if (point_segment_dist(L[j], L[(j + 1) % 3], a) <= eps &&
          point_segment_dist(L[j], L[(j + 1) % 3], b) <= eps)
        on_b = true;
    }
    double s0 = acc;
    acc += c.segment_length(i);
    if (!runs.empty() && (runs.back()[2] > 0.5) == on_b) runs.back()[1] = acc;
    else runs.push_back({s0, acc, on_b ? 1.0 : 0.0});
  }
  return runs;
}

int winding_number(const IntrinsicMesh& m, const SurfaceCurve& closed, const SurfacePoint& p) {
  auto cc = CutComplex::build(m, {closed});
  std::vector<int> all;
  for (int t = 0; t < cc.tri_count(); t++) all.push_back(t);
  return cc.winding_number(0, p, all);
}

} // namespace geotri
