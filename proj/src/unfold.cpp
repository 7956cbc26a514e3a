#include "geotri/unfold.hpp"

#include <algorithm>

#include "geotri/errors.hpp"

namespace geotri {

Rigid2 Rigid2::from_pairs(Vec2 a_from, Vec2 b_from, Vec2 a_to, Vec2 b_to) {
  Vec2 u = b_from - a_from, v = b_to - a_to;
  double nu = u.norm(), nv = v.norm();
  Rigid2 r;
  if (nu > 0 && nv > 0) {
    u = u / nu;
    v = v / nv;
    r.c = u.x * v.x + u.y * v.y;
    r.s = u.x * v.y - u.y * v.x;
  }
  r.t = a_to - r.apply_dir(a_from);
  return r;
}

Rigid2 chart_transfer(const IntrinsicMesh& m, int h) {
  int ht = m.twin(h);
  if (ht < 0) throw Error("chart_transfer across boundary halfedge");
  int f = IntrinsicMesh::he_face(h), i = IntrinsicMesh::he_side(h);
  int g = IntrinsicMesh::he_face(ht), j = IntrinsicMesh::he_side(ht);
  const auto& Lf = m.layout(f);
  const auto& Lg = m.layout(g);
  return Rigid2::from_pairs(Lg[j], Lg[(j + 1) % 3], Lf[(i + 1) % 3], Lf[i]);
}

StripLayout unfold_strip(const IntrinsicMesh& m, int f0, const std::vector<int>& crossings) {
  StripLayout s;
  s.faces.push_back(f0);
  s.charts.push_back(Rigid2{});
  s.crossings = crossings;
  for (int h : crossings) {
    int f = s.faces.back();
    if (IntrinsicMesh::he_face(h) != f) throw Error("unfold_strip: crossing not in current face");
    int ht = m.twin(h);
    if (ht < 0) throw Error("unfold_strip: crossing is a boundary halfedge");
    s.charts.push_back(chart_transfer(m, h).then(s.charts.back()));
    s.faces.push_back(IntrinsicMesh::he_face(ht));
  }
  return s;
}

std::pair<Vec2, Vec2> StripLayout::portal(const IntrinsicMesh& m, int i) const {
  int h = crossings[i];
  int f = IntrinsicMesh::he_face(h), k = IntrinsicMesh::he_side(h);
  const auto& L = m.layout(f);
  return {charts[i].apply(L[k]), charts[i].apply(L[(k + 1) % 3])};
}

RayTrace trace_ray(const IntrinsicMesh& m, const SurfacePoint& start, int face, Vec2 dir,
                   double length) {
  RayTrace out;
  double eps = m.snap_eps();
  std::vector<SurfacePoint> pts{start};
  std::vector<int> hints;
  int f = face;
  Vec2 pos = pos_in_face(m, start, f);
  Vec2 d = dir.normalized();
  double remaining = length;
  int guard = 0;
  const int max_steps = 100000;
  while (remaining > eps) {
    if (++guard > max_steps) throw StraighteningDiverged("trace_ray exceeded step limit");
    const auto& L = m.layout(f);
    // Find the first side the ray exits through.
    int best_side = -1;
    double best_s = 1e300, best_u = 0;
    for (int j = 0; j < 3; j++) {
      Vec2 A = L[j], B = L[(j + 1) % 3];
      Vec2 e = B - A;
      double denom = d.cross(e);
      if (std::abs(denom) < 1e-15) continue;
      double sray = (A - pos).cross(e) / denom;
      double u = (A - pos).cross(d) / denom;
      if (sray <= eps || u < -1e-9 || u > 1 + 1e-9) continue;
      if (sray < best_s) {
        best_s = sray;
        best_side = j;
        best_u = std::min(1.0, std::max(0.0, u));
      }
    }
    if (best_side < 0 || best_s >= remaining) {
      // Endpoint inside this face.
      double step = std::min(remaining, best_side < 0 ? remaining : best_s);
      Vec2 end = pos + d * step;
      pts.push_back(point_from_pos(m, f, end));
      hints.push_back(f);
      out.traced += step;
      remaining = 0;
      break;
    }
    int h = 3 * f + best_side;
    double side_len = m.he_length(h);
    // Vertex hit if the crossing is too close to a corner.
    if (best_u * side_len < eps || (1 - best_u) * side_len < eps) {
      int corner = best_u < 0.5 ? best_side : (best_side + 1) % 3;
      Vec2 end = L[corner];
      out.stop = RayTrace::Stop::Vertex;
      out.hit_vertex = m.corner_vertex(f, corner);
      out.traced += dist(pos, end);
      pts.push_back(SurfacePoint::vertex(out.hit_vertex, 3 * f + corner));
      hints.push_back(f);
      out.curve = SurfaceCurve(m, std::move(pts), hints);
      return out;
    }
    Vec2 cross_pos = pos + d * best_s;
    int e = m.edge_of_he(h);
    double t_can = (m.edge_halfedge(e) == h) ? best_u : 1 - best_u;
    pts.push_back(SurfacePoint::edge(e, t_can));
    hints.push_back(f);
    out.traced += best_s;
    remaining -= best_s;
    if (m.twin(h) < 0) {
      out.stop = RayTrace::Stop::Boundary;
      out.curve = SurfaceCurve(m, std::move(pts), hints);
      return out;
    }
    Rigid2 to_prev = chart_transfer(m, h);  // neighbor chart -> f chart
    Rigid2 from_prev = to_prev.inverse();
    pos = from_prev.apply(cross_pos);
    d = from_prev.apply_dir(d);
    f = IntrinsicMesh::he_face(m.twin(h));
  }
  if (remaining > 0 && pts.size() == 1) {
    pts.push_back(start);
    hints.push_back(f);
  }
  out.curve = SurfaceCurve(m, std::move(pts), hints);
  return out;
}

FunnelPath funnel_shortest(const std::vector<std::pair<Vec2, Vec2>>& portals, Vec2 s, Vec2 t,
                           double eps) {
  // Left/right per portal from the traveler's perspective: callers pass
  // (head, tail) of each crossing halfedge, i.e. (left, right).
  int n = static_cast<int>(portals.size());
  std::vector<Vec2> ls(n + 1), rs(n + 1);
  for (int i = 0; i < n; i++) {
    ls[i] = portals[i].first;
    rs[i] = portals[i].second;
  }
  ls[n] = rs[n] = t;

  struct Bend {
    Vec2 pos;
    int portal;
    bool left;
  };
  std::vector<Bend> bends;

  auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); };
  auto near = [&](Vec2 a, Vec2 b) { return dist(a, b) <= eps; };

  Vec2 apex = s, pl = s, pr = s;
  int apex_i = -1, li = -1, ri = -1;
  int guard = 0;
  for (int i = 0; i <= n; i++) {
    if (++guard > 16 * (n + 2) * (n + 2) + 64)
      throw StraighteningDiverged("funnel did not converge");
    Vec2 l = ls[i], r = rs[i];
    // Tighten right side.
    if (orient(apex, pr, r) >= -eps * (dist(apex, pr) + 1)) {
      if (near(apex, pr) || orient(apex, pl, r) <= eps * (dist(apex, pl) + 1)) {
        pr = r;
        ri = i;
      } else {
        // Right sweep crossed the left chain: left point becomes apex.
        bends.push_back({pl, li, true});
        apex = pl;
        apex_i = li;
        pr = apex;
        ri = apex_i;
        i = apex_i;  // restart after the apex portal
        continue;
      }
    }
    // Tighten left side.
    if (orient(apex, pl, l) <= eps * (dist(apex, pl) + 1)) {
      if (near(apex, pl) || orient(apex, pr, l) >= -eps * (dist(apex, pr) + 1)) {
        pl = l;
        li = i;
      } else {
        bends.push_back({pr, ri, false});
        apex = pr;
        apex_i = ri;
        pl = apex;
        li = apex_i;
        i = apex_i;
        continue;
      }
    }
  }

  // Assemble: s, one node per portal (crossing position), t.
  FunnelPath out;
  std::vector<Vec2> anchor{s};
  std::vector<int> anchor_portal{-1};
  for (const auto& b : bends) {
    anchor.push_back(b.pos);
    anchor_portal.push_back(b.portal);
  }
  anchor.push_back(t);
  anchor_portal.push_back(n);

  out.nodes.push_back({s, -1, 0, -1, false});
  size_t seg = 0;
  for (int i = 0; i < n; i++) {
    // Advance to the anchor segment spanning portal i.
    while (seg + 1 < anchor.size() - 1 && anchor_portal[seg + 1] <= i) seg++;
    FunnelNode node;
    node.portal = i;
    if (anchor_portal[seg] == i && seg > 0) {
      node.pos = anchor[seg];
      node.apex_portal = bends[seg - 1].portal;
      node.apex_left = bends[seg - 1].left;
    } else {
      Vec2 a = anchor[seg], b = anchor[seg + 1];
      auto isect = segment_intersection(a, b, ls[i], rs[i], eps);
      if (isect.kind == SegIsect::None) {
        // Degenerate funnel; clamp to the closest portal point.
        double u = closest_param(ls[i], rs[i], a);
        node.pos = ls[i] + (rs[i] - ls[i]) * u;
      } else {
        node.pos = ls[i] + (rs[i] - ls[i]) * isect.u;
      }
    }
    // Crossing parameter along tail->head = 1 - parameter along left->right.
    double u = closest_param(ls[i], rs[i], node.pos);
    node.t = 1 - u;
    out.nodes.push_back(node);
  }
  out.nodes.push_back({t, -1, 0, -1, false});
  for (size_t i = 0; i + 1 < out.nodes.size(); i++)
    out.length += dist(out.nodes[i].pos, out.nodes[i + 1].pos);
  return out;
}

} // namespace geotri
