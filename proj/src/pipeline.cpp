#include "geotri/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

namespace {

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

// Ray directions from a point: for vertices the fan is swept across the full
// angle, otherwise plain plane directions in the host face.
struct RaySpec {
  int face;
  Vec2 dir;
  SurfacePoint from;
};
std::vector<RaySpec> ray_directions(const IntrinsicMesh& m, const SurfacePoint& x, int count,
                                    double jitter_angle) {
  std::vector<RaySpec> out;
  if (x.kind == SurfacePoint::Kind::Vertex) {
    double total = m.vertex_angle(x.id);
    const auto& fan = m.vertex_halfedges(x.id);
    // Walk the fan clockwise, distributing directions evenly across it.
    double step = total / count;
    double want = jitter_angle * 0.5 + 1e-3;
    size_t fi = 0;
    double used = 0;  // angle consumed in previous corners
    for (int k = 0; k < count && fi < fan.size(); k++) {
      while (fi < fan.size()) {
        int slot = fan[fi];
        int f = IntrinsicMesh::he_face(slot), i = IntrinsicMesh::he_side(slot);
        double corner = m.corner_angle(f, i);
        if (want - used <= corner - 1e-9) {
          const auto& L = m.layout(f);
          Vec2 d0 = (L[(i + 1) % 3] - L[i]).normalized();
          // Corners are swept clockwise from the outgoing spoke in my fan
          // ordering; rotate counterclockwise into the wedge.
          out.push_back({f, rotate(d0, want - used), SurfacePoint::vertex(x.id, slot)});
          break;
        }
        used += corner;
        fi++;
      }
      want += step;
    }
    return out;
  }
  int f = incident_faces(m, x)[0];
  for (int k = 0; k < count; k++) {
    double ang = 2 * M_PI * k / count + jitter_angle;
    out.push_back({f, {std::cos(ang), std::sin(ang)}, x});
  }
  return out;
}

// Simple Jordan-ization: splits a closed walk at a repeated node and keeps
// the sub-loop that still winds around x.
std::vector<std::pair<int, int>> extract_winding_loop(const CutComplex& cc,
                                                      std::vector<std::pair<int, int>> walk,
                                                      const SurfacePoint& x,
                                                      const std::vector<int>& ambient_tris) {
  int guard = 0;
  while (true) {
    if (++guard > 4 * static_cast<int>(walk.size()) + 64)
      throw Error("extract_winding_loop: did not converge");
    // Find a repeated head node.
    std::map<int, int> seen;  // node -> position
    int split_a = -1, split_b = -1;
    for (int i = 0; i < static_cast<int>(walk.size()); i++) {
      auto [sid, dir] = walk[i];
      const auto& s = cc.side(sid);
      int head = dir > 0 ? s.node_b : s.node_a;
      auto it = seen.find(head);
      if (it != seen.end()) {
        split_a = it->second;
        split_b = i;
        break;
      }
      seen[head] = i;
    }
    if (split_a < 0) return walk;  // simple
    std::vector<std::pair<int, int>> inner(walk.begin() + split_a + 1, walk.begin() + split_b + 1);
    std::vector<std::pair<int, int>> outer;
    for (int i = 0; i < static_cast<int>(walk.size()); i++)
      if (i <= split_a || i > split_b) outer.push_back(walk[i]);
    int w_inner = 0;
    try {
      w_inner = cc.winding_number_walk(inner, x, ambient_tris);
    } catch (const Error&) {
      w_inner = 0;
    }
    walk = (w_inner != 0) ? std::move(inner) : std::move(outer);
    if (walk.empty()) throw Error("extract_winding_loop: lost the winding loop");
  }
}

// Merge consecutive arcs that lie on a common source curve so a triangle's
// boundary collapses to at most three geodesic edges.
std::vector<GeodesicPath> merge_arcs_by_source(const IntrinsicMesh& m, const CutComplex& cc,
                                               const std::vector<std::pair<int, int>>& loop) {
  int n = static_cast<int>(loop.size());
  // Label set per walk element.
  std::vector<std::set<int>> labels(n);
  for (int i = 0; i < n; i++) labels[i] = cc.side(loop[i].first).curves;
  // Greedy runs: extend while the running intersection stays nonempty.
  std::vector<std::pair<int, int>> run_bounds;  // [start, end) indices
  // Start at a position where the intersection with the previous breaks.
  int start = 0;
  {
    std::set<int> inter = labels[0];
    for (int i = n - 1; i > 0; i--) {
      std::set<int> tmp;
      std::set_intersection(inter.begin(), inter.end(), labels[i].begin(), labels[i].end(),
                            std::inserter(tmp, tmp.begin()));
      if (tmp.empty()) {
        start = i == n - 1 ? 0 : i + 1;
        break;
      }
      inter = tmp;
    }
  }
  std::vector<GeodesicPath> out;
  std::vector<std::pair<int, int>> arc;
  std::set<int> inter;
  for (int k = 0; k < n; k++) {
    int i = (start + k) % n;
    if (arc.empty()) {
      inter = labels[i];
      arc.push_back(loop[i]);
      continue;
    }
    std::set<int> tmp;
    std::set_intersection(inter.begin(), inter.end(), labels[i].begin(), labels[i].end(),
                          std::inserter(tmp, tmp.begin()));
    if (tmp.empty()) {
      auto curve = cc.walk_curve(arc);
      out.push_back({curve, certify_path(m, curve)});
      arc.clear();
      inter = labels[i];
    } else {
      inter = tmp;
    }
    arc.push_back(loop[i]);
  }
  if (!arc.empty()) {
    auto curve = cc.walk_curve(arc);
    out.push_back({curve, certify_path(m, curve)});
  }
  return out;
}

bool on_mesh_boundary(const IntrinsicMesh& m, const SurfacePoint& p) {
  switch (p.kind) {
    case SurfacePoint::Kind::Vertex: return m.vertex_on_boundary(p.id);
    case SurfacePoint::Kind::Edge: return m.edge_is_boundary(p.id);
    case SurfacePoint::Kind::Face: return false;
  }
  return false;
}

// Walk along the mesh boundary from a boundary point; returns the traversed
// curve starting at x.
SurfaceCurve boundary_walk_curve(const IntrinsicMesh& m, const SurfacePoint& x, double arclen,
                                 bool forward) {
  // Successor map along boundary loops.
  std::map<int, int> next_he, prev_he;
  for (const auto& loop : m.boundary_loops())
    for (size_t i = 0; i < loop.size(); i++) {
      next_he[loop[i]] = loop[(i + 1) % loop.size()];
      prev_he[loop[(i + 1) % loop.size()]] = loop[i];
    }
  int h;
  double t;  // param along the halfedge direction
  if (x.kind == SurfacePoint::Kind::Edge) {
    h = m.edge_halfedge(x.id);
    if (m.twin(h) >= 0) throw Error("boundary_walk_curve: not a boundary edge");
    t = x.t;
  } else if (x.kind == SurfacePoint::Kind::Vertex) {
    // Start at the outgoing (forward) or incoming (backward) boundary he.
    h = -1;
    for (const auto& loop : m.boundary_loops())
      for (int lh : loop)
        if (m.he_tail(lh) == x.id) h = lh;
    if (h < 0) throw Error("boundary_walk_curve: vertex not on boundary");
    t = 0;
    if (!forward) {
      h = prev_he[h];
      t = 1;
    }
  } else {
    throw Error("boundary_walk_curve: point not on boundary");
  }
  std::vector<SurfacePoint> pts{x};
  std::vector<int> hints;
  double remaining = arclen;
  int guard = 0;
  while (remaining > 8 * m.snap_eps()) {
    if (++guard > 4 * m.halfedge_count() + 8) throw Error("boundary_walk_curve stuck");
    double len = m.he_length(h);
    double avail = forward ? (1 - t) * len : t * len;
    int f = IntrinsicMesh::he_face(h);
    int e = m.edge_of_he(h);
    if (avail >= remaining) {
      double nt = forward ? t + remaining / len : t - remaining / len;
      nt = std::min(1.0 - 1e-12, std::max(1e-12, nt));
      pts.push_back(SurfacePoint::edge(e, nt));
      hints.push_back(f);
      remaining = 0;
      break;
    }
    remaining -= avail;
    int v = forward ? m.he_head(h) : m.he_tail(h);
    int slot = forward ? IntrinsicMesh::he_next(h) : h;
    int nh = forward ? next_he[h] : prev_he[h];
    if (!(pts.back().kind == SurfacePoint::Kind::Vertex && pts.back().id == v)) {
      auto vp = SurfacePoint::vertex(v, slot);
      vp.rep2 = forward ? nh : IntrinsicMesh::he_next(nh);
      pts.push_back(vp);
      hints.push_back(f);
    }
    h = nh;
    t = forward ? 0 : 1;
  }
  return SurfaceCurve(m, std::move(pts), hints);
}

}  // namespace

PolygonRegion polygon_neighborhood(MeshContext& ctx, const SurfacePoint& x, double eps,
                                   uint64_t seed) {
  const auto& m = ctx.mesh();
  std::mt19937_64 rng(seed * 7919 + 17);
  double r_U = eps / 2;
  // Keep boundary vertices of the mesh out of U (except x itself).
  {
    auto& g = ctx.graph(16);
    auto field = g.distance_field({x});
    for (int v = 0; v < m.vertex_count(); v++) {
      if (!m.vertex_on_boundary(v)) continue;
      double d = g.field_at(field, SurfacePoint::vertex(v));
      if (d > 16 * m.snap_eps()) r_U = std::min(r_U, 0.9 * d);
    }
  }
  auto U = make_disk_neighborhood(ctx, x, r_U);
  double r_V = r_U / 4;
  bool x_on_boundary = on_mesh_boundary(m, x);
  // Probe slightly inside for winding and containment queries when x is on
  // the mesh boundary.
  SurfacePoint probe = x;
  if (x_on_boundary) {
    auto dirs = ray_directions(m, x, 3, 0.0);
    auto rt = trace_ray(m, dirs[1].from, dirs[1].face, dirs[1].dir, r_V / 64);
    probe = rt.curve.back();
  }

  double delta = r_V / 2;
  for (int attempt = 0; attempt < 20; attempt++, delta /= 2) {
    int count = std::max(6, static_cast<int>(std::ceil(2 * M_PI * r_V / delta)));
    if (count > 160) throw SamplingTooCoarse("polygon_neighborhood: sampling exploded");
    double jitter = (std::uniform_real_distribution<double>(0, 1)(rng)) * (2 * M_PI / count) * 0.3;
    std::vector<SurfacePoint> ys;
    std::vector<SurfaceCurve> pre_curves;
    bool bad = false;
    if (!x_on_boundary) {
      auto rays = ray_directions(m, x, count, jitter);
      for (auto& r : rays) {
        auto rt = trace_ray(m, r.from, r.face, r.dir, r_V);
        if (rt.stop == RayTrace::Stop::Vertex) { bad = true; break; }
        ys.push_back(rt.curve.back());
      }
    } else {
      // Boundary case: the loop runs along the mesh boundary through x and
      // around through the interior wedge.
      SurfaceCurve arc_minus, arc_plus;
      try {
        arc_minus = boundary_walk_curve(m, x, r_V, false);
        arc_plus = boundary_walk_curve(m, x, r_V, true);
      } catch (const Error&) {
        break;
      }
      SurfaceCurve arc_b =
          arc_minus.reversed().concatenated(m, arc_plus, 16 * m.snap_eps());
      pre_curves.push_back(arc_b);
      // Interior wedge directions ordered from the forward boundary side
      // (the surface lies on the left of boundary halfedges).
      std::vector<RaySpec> rays;
      if (x.kind == SurfacePoint::Kind::Edge) {
        int h = m.edge_halfedge(x.id);
        int f = IntrinsicMesh::he_face(h), j = IntrinsicMesh::he_side(h);
        const auto& L = m.layout(f);
        Vec2 d_b = (L[(j + 1) % 3] - L[j]).normalized();
        for (int k = 0; k < count; k++) {
          double theta = M_PI * (k + 0.5 + 0.3 * jitter) / count;
          rays.push_back({f, rotate(d_b, theta), x});
        }
      } else {
        rays = ray_directions(m, x, count, jitter);
        std::reverse(rays.begin(), rays.end());
      }
      ys.push_back(arc_plus.back());
      for (auto& r : rays) {
        auto rt = trace_ray(m, r.from, r.face, r.dir, r_V);
        if (rt.stop == RayTrace::Stop::Vertex) { bad = true; break; }
        if (rt.traced < r_V / 8) continue;  // degenerate grazing ray
        ys.push_back(rt.curve.back());
      }
      ys.push_back(arc_minus.back());
    }
    if (bad || ys.size() < 3) continue;
    // Connect consecutive sample points by geodesics.
    auto& g = ctx.graph(16);
    std::vector<SurfaceCurve> curves = pre_curves;
    bool fail = false;
    int chain_n = static_cast<int>(ys.size());
    for (int i = 0; i < chain_n - (x_on_boundary ? 1 : 0) && !fail; i++) {
      const auto& a = ys[i];
      const auto& b = ys[(i + 1) % chain_n];
      if (same_point(m, a, b, 8 * m.snap_eps())) continue;
      try {
        auto sp = shortest_path(m, g, a, b);
        if (sp.length() > 6 * delta + 8 * m.snap_eps()) fail = true;
        curves.push_back(sp.curve);
      } catch (const Error&) {
        fail = true;
      }
    }
    if (fail || curves.size() < 3) continue;

    CutComplex cc = CutComplex::build(m, curves);
    std::vector<int> walls;
    for (size_t i = 0; i < curves.size(); i++) walls.push_back(static_cast<int>(i));
    auto rs = cc.regions(walls);
    // Component containing the probe point.
    auto at = cc.locate_all(probe);
    if (at.empty()) continue;
    int rid = rs.region_of_tri[at[0]];
    bool on_curve = false;
    for (int t : at)
      if (rs.region_of_tri[t] != rid) on_curve = true;
    if (on_curve && probe.kind != SurfacePoint::Kind::Vertex) continue;
    const auto& R = rs.regions[rid];
    // The component must stay inside U.
    bool inside_U = true;
    for (int t : R.tris) {
      const auto& T = cc.tri(t);
      for (int j = 0; j < 3 && inside_U; j++) {
        auto p = point_from_pos(m, T.base_face, T.pos[j]);
        if (U->dist_from_center(p) > r_U * 0.98) inside_U = false;
      }
    }
    if (!inside_U || R.boundary_loops.empty()) continue;
    // Jordan-ize: find the loop winding around x, reduce it to a simple one.
    std::vector<int> all_tris;
    for (int t = 0; t < cc.tri_count(); t++) all_tris.push_back(t);
    std::vector<std::pair<int, int>> winding_loop;
    for (auto& loop : R.boundary_loops) {
      try {
        if (std::abs(cc.winding_number_walk(loop, probe, all_tris)) == 1) {
          winding_loop = loop;
          break;
        }
      } catch (const Error&) {
        continue;
      }
    }
    if (winding_loop.empty()) {
      if (R.boundary_loops.size() == 1) winding_loop = R.boundary_loops[0];
      else continue;
    }
    std::vector<std::pair<int, int>> jordan;
    try {
      jordan = extract_winding_loop(cc, winding_loop, probe, all_tris);
    } catch (const Error&) {
      continue;
    }
    auto edges = merge_arcs_by_source(m, cc, jordan);
    PolygonRegion P;
    try {
      P = make_polygon(m, edges);
    } catch (const Error&) {
      continue;
    }
    if (!P.contains(m, probe)) {
      // Reverse orientation.
      std::vector<GeodesicPath> rev;
      for (auto it = edges.rbegin(); it != edges.rend(); ++it)
        rev.push_back({it->curve.reversed(), it->cert});
      try {
        P = make_polygon(m, rev);
      } catch (const Error&) {
        continue;
      }
      if (!P.contains(m, probe)) continue;
    }
    if (!P.is_disk) continue;
    if (!P.contains(m, x)) continue;
    if (!x_on_boundary && !P.contains_interior(m, x, 2 * m.snap_eps())) continue;
    auto diam = region_diameter(*P.cc, P.region_tris, eps / 8);
    if (diam.upper > eps) continue;
    // Transit vertices: perturbed sampling keeps them off cone points.
    bool transit_ok = true;
    for (const auto& v : P.vertices) {
      if (same_point(m, v, x, 4 * m.snap_eps())) continue;
      if (!is_transit_point(m, v).transit) transit_ok = false;
    }
    if (!transit_ok) continue;
    return P;
  }
  throw SamplingTooCoarse("polygon_neighborhood: no attempt succeeded");
}

// Constructs the second geodesic of a superfluous-free pair given the first.
static GeodesicPath pair_with_previous(MeshContext& ctx, const std::vector<GeodesicPath>& edges,
                                       const GeodesicPath& gamma_prev, const SurfacePoint& p0,
                                       const SurfacePoint& p2) {
  const auto& m = ctx.mesh();
  auto& g = ctx.graph(16);
  auto eta_t = geodesic_without_superfluous(m, g, edges, p0, p2);
  auto contacts = curve_contacts(m, eta_t.curve, gamma_prev.curve);
  if (contacts.empty() || contacts.components <= 1) return eta_t;
  double slack = std::max(m.tol_len(), 64 * m.snap_eps());
  double s_q = contacts.last_a();
  double t_q = 0;
  for (const auto& ev : contacts.events)
    if (ev.a1 >= s_q - 1e-12) t_q = ev.b1;
  auto eta = splice_between(m, eta_t.curve, 0, s_q, gamma_prev.curve, 0, t_q);
  if (eta.length() > eta_t.length() + slack)
    throw Error("pair_with_previous: splice increased length");
  auto eta_s = straighten_path(m, eta.simplified(m, m.snap_eps()));
  eta_s = remove_superfluous_from(m, eta_s, edges);
  auto c2 = curve_contacts(m, eta_s.curve, gamma_prev.curve);
  if (c2.components > 1) {
    double s0 = c2.first_a(), s1 = c2.last_a();
    double t0 = 0, t1 = 0;
    for (const auto& ev : c2.events) {
      if (ev.a0 <= s0 + 1e-12) t0 = ev.b0;
      if (ev.a1 >= s1 - 1e-12) t1 = ev.b1;
    }
    auto pa0 = eta_s.curve.at_arclength(m, s0);
    auto pb0 = gamma_prev.curve.at_arclength(m, t0);
    if (!same_point(m, pa0, pb0, 64 * m.snap_eps())) std::swap(t0, t1);
    auto respliced = splice_between(m, eta_s.curve, s0, s1, gamma_prev.curve, t0, t1);
    eta_s = straighten_path(m, respliced.simplified(m, m.snap_eps()));
    eta_s = remove_superfluous_from(m, eta_s, edges);
  }
  return eta_s;
}

FanCover triangle_fan_cover(MeshContext& ctx, const SurfacePoint& x, double eps, uint64_t seed) {
  const auto& m = ctx.mesh();
  FanCover out;
  double r_V = 0.45 * eps;
  out.ambient = make_disk_neighborhood(ctx, x, r_V);
  double eps_P = r_V / 4;
  out.base_polygon = polygon_neighborhood(ctx, x, eps_P, seed);
  PolygonRegion& P = out.base_polygon;

  // Hypothesis of the superfluous-intersection lemma.
  double max_d = 0;
  for (const auto& v : P.vertices) max_d = std::max(max_d, out.ambient->dist_from_center(v));
  auto pdiam = region_diameter(*P.cc, P.region_tris, eps_P / 4);
  if (r_V - (max_d + pdiam.upper) <= pdiam.upper)
    throw StageFailure("triangle_fan_cover: margin hypothesis failed");

  // Base vertex: maximize distance to the ambient boundary = minimize the
  // distance from the center.
  int n_edges = static_cast<int>(P.edges.size());
  int v0_idx = 0;
  double best = 1e300;
  for (int i = 0; i < n_edges; i++) {
    double d = out.ambient->dist_from_center(P.vertices[i]);
    if (d < best) {
      best = d;
      v0_idx = i;
    }
  }
  // Rotate edges so edge 0 starts at v0.
  std::vector<GeodesicPath> edges;
  for (int i = 0; i < n_edges; i++) edges.push_back(P.edges[(v0_idx + i) % n_edges]);
  std::vector<SurfacePoint> verts;
  for (int i = 0; i < n_edges; i++) verts.push_back(P.vertices[(v0_idx + i) % n_edges]);

  // Fan geodesics gamma_i from v0 to vertex i (gamma_0 is meaningless;
  // gamma_1 = edge 0, gamma_n = reversed last edge).
  std::vector<GeodesicPath> gamma(n_edges);
  gamma[1] = edges[0];
  for (int i = 2; i <= n_edges - 1; i++)
    gamma[i] = pair_with_previous(ctx, edges, gamma[i - 1], verts[0], verts[i]);
  GeodesicPath last{edges[n_edges - 1].curve.reversed(), edges[n_edges - 1].cert};

  // Triangles from c_i = gamma_i * e_i * reversed(gamma_{i+1}).
  for (int i = 1; i <= n_edges - 1; i++) {
    const GeodesicPath& gi = gamma[i];
    const GeodesicPath& gi1 = (i + 1 <= n_edges - 1) ? gamma[i + 1] : last;
    std::vector<SurfaceCurve> curves{gi.curve, edges[i].curve, gi1.curve};
    CutComplex cc = CutComplex::build(m, curves);
    auto rs = cc.regions({0, 1, 2});
    // Inner components: fully inside the ambient ball.
    int outer = -1;
    double best_area = -1;
    for (size_t r = 0; r < rs.regions.size(); r++)
      if (rs.regions[r].area > best_area) {
        best_area = rs.regions[r].area;
        outer = static_cast<int>(r);
      }
    for (size_t r = 0; r < rs.regions.size(); r++) {
      if (static_cast<int>(r) == outer) continue;
      const auto& R = rs.regions[r];
      bool inside = true;
      for (int t : R.tris) {
        const auto& T = cc.tri(t);
        for (int j = 0; j < 3 && inside; j++)
          if (out.ambient->dist_from_center(point_from_pos(m, T.base_face, T.pos[j])) >
              r_V * 0.999)
            inside = false;
      }
      if (!inside || R.boundary_loops.empty()) continue;
      // Jordan-ize the outer boundary of this component (drops the pointing
      // ends) and merge label runs into at most three edges.
      auto loop = R.boundary_loops[0];
      if (R.boundary_loops.size() > 1) {
        // Take the loop with the largest total length (outer one).
        double bestlen = -1;
        for (auto& l : R.boundary_loops) {
          double len = cc.walk_curve(l).length();
          if (len > bestlen) {
            bestlen = len;
            loop = l;
          }
        }
      }
      // Pick an interior probe point for the winding-based Jordan-ization.
      const auto& T0 = cc.tri(R.tris[0]);
      Vec2 c2 = (T0.pos[0] + T0.pos[1] + T0.pos[2]) / 3.0;
      auto probe = point_from_pos(m, T0.base_face, c2);
      std::vector<int> all_tris;
      for (int t = 0; t < cc.tri_count(); t++) all_tris.push_back(t);
      std::vector<std::pair<int, int>> jordan;
      try {
        jordan = extract_winding_loop(cc, loop, probe, all_tris);
      } catch (const Error&) {
        continue;
      }
      auto tri_edges = merge_arcs_by_source(m, cc, jordan);
      if (tri_edges.size() > 3) continue;
      PolygonRegion T;
      try {
        T = make_polygon(m, tri_edges);
        if (!T.contains(m, probe)) {
          std::vector<GeodesicPath> rev;
          for (auto it = tri_edges.rbegin(); it != tri_edges.rend(); ++it)
            rev.push_back({it->curve.reversed(), it->cert});
          T = make_polygon(m, rev);
        }
      } catch (const Error&) {
        continue;
      }
      if (!T.is_disk) continue;
      if (T.perimeter() > 3 * eps + m.tol_len()) continue;
      out.triangles.push_back(std::move(T));
    }
  }

  // Exact coverage: every piece of P lies in some triangle.
  {
    std::vector<SurfaceCurve> all_curves;
    for (int i = 1; i <= n_edges - 1; i++) all_curves.push_back(gamma[i].curve);
    all_curves.push_back(last.curve);
    for (auto& e : edges) all_curves.push_back(e.curve);
    CutComplex cc = CutComplex::build(m, all_curves);
    for (int t = 0; t < cc.tri_count(); t++) {
      const auto& T = cc.tri(t);
      Vec2 c2 = (T.pos[0] + T.pos[1] + T.pos[2]) / 3.0;
      auto probe = point_from_pos(m, T.base_face, c2);
      if (!P.contains(m, probe)) continue;
      bool covered = false;
      for (const auto& tri : out.triangles)
        if (tri.contains(m, probe)) covered = true;
      if (!covered) throw StageFailure("triangle_fan_cover: fan does not cover the base polygon");
    }
  }
  return out;
}

PolygonRegion shortest_enclosing_curve(MeshContext& ctx, const PolygonRegion& K,
                                       const DiskNeighborhood& U) {
  const auto& m = ctx.mesh();
  // Hypothesis: K strictly inside U (mesh-boundary contacts are fine).
  for (const auto& e : K.edges)
    for (const auto& p : e.curve.points())
      if (U.dist_from_center(p) > U.radius - 8 * m.snap_eps())
        throw NotContained("K touches the boundary of U");

  auto annulus = annulus_region(ctx, K, U);
  SurfaceCurve c = K.boundary_curve(m);
  auto runs = mesh_boundary_runs(m, c);
  SurfaceCurve base_cycle;
  // Pinch parameters: places where the curve meets the mesh boundary (arcs
  // or isolated points); the annulus is pinched there.
  std::vector<double> pinches;
  std::vector<std::pair<double, double>> kept;  // on-boundary arcs
  for (auto& r : runs)
    if (r[2] > 0.5) {
      pinches.push_back(r[0]);
      pinches.push_back(r[1]);
      kept.push_back({r[0], r[1]});
    }
  std::sort(pinches.begin(), pinches.end());
  pinches.erase(std::unique(pinches.begin(), pinches.end(),
                            [&](double a, double b) { return b - a < 8 * m.snap_eps(); }),
                pinches.end());
  if (!pinches.empty() && pinches.back() > c.length() - 8 * m.snap_eps() &&
      pinches.front() < 8 * m.snap_eps())
    pinches.pop_back();

  if (pinches.empty()) {
    SurfaceCurve mapped = annulus->to_region(c);
    auto cycle = shorten_closed_curve(annulus->mesh(), mapped);
    base_cycle = annulus->to_base(cycle.curve);
  } else {
    // Shorten each open arc between consecutive pinch points rel endpoints;
    // arcs along the mesh boundary are kept as they are.
    auto on_kept_arc = [&](double s0, double s1) {
      for (auto& [a, b] : kept)
        if (s0 >= a - 8 * m.snap_eps() && s1 <= b + 8 * m.snap_eps()) return true;
      return false;
    };
    SurfaceCurve assembled;
    int np = static_cast<int>(pinches.size());
    for (int i = 0; i < np; i++) {
      double s0 = pinches[i];
      double s1 = (i + 1 < np) ? pinches[i + 1] : pinches[0] + c.length();
      SurfaceCurve piece;
      if (s1 <= c.length() + 1e-15) {
        piece = c.sub_arclength(m, s0, std::min(s1, c.length()));
      } else {
        piece = c.sub_arclength(m, s0, c.length())
                    .concatenated(m, c.sub_arclength(m, 0, s1 - c.length()), 32 * m.snap_eps());
      }
      if (piece.length() <= 8 * m.snap_eps()) continue;
      if (!on_kept_arc(s0, std::min(s1, c.length()))) {
        SurfaceCurve mapped = annulus->to_region(piece);
        auto shortened = shortest_homotopic(annulus->mesh(), mapped);
        piece = annulus->to_base(shortened.curve);
      }
      assembled = assembled.empty() ? piece
                                    : assembled.concatenated(m, piece, 32 * m.snap_eps());
    }
    if (!assembled.is_closed(m, 32 * m.snap_eps()))
      throw Error("shortest_enclosing_curve: assembled cycle is not closed");
    base_cycle = assembled;
  }
  // Certification-driven improvement: any boundary sub-arc beaten by a
  // homotopic competitor gets replaced, then the cycle is re-shortened.
  auto build_polygon = [&](const SurfaceCurve& base_curve) {
    // Split the closed curve into geodesic edges at its geometric corners.
    std::vector<double> breaks{0};
    auto cum = base_curve.cumulative_lengths();
    int nseg = base_curve.segment_count();
    for (int i = 1; i < nseg; i++) {
      int f_prev = base_curve.segment_face(i - 1);
      int f_next = base_curve.segment_face(i);
      Vec2 a = pos_in_face(m, base_curve.point(i - 1), f_prev);
      Vec2 b1 = pos_in_face(m, base_curve.point(i), f_prev);
      Vec2 b2, c2;
      if (f_prev == f_next) {
        b2 = b1;
        c2 = pos_in_face(m, base_curve.point(i + 1), f_prev);
      } else {
        // Unfold the next face into f_prev's chart.
        int h = -1;
        for (int j = 0; j < 3; j++) {
          int cand = 3 * f_prev + j;
          if (m.twin(cand) >= 0 && IntrinsicMesh::he_face(m.twin(cand)) == f_next) h = cand;
        }
        if (h < 0) {
          breaks.push_back(cum[i]);  // cannot unfold: treat as a corner
          continue;
        }
        Rigid2 X = chart_transfer(m, h);
        b2 = b1;
        c2 = X.apply(pos_in_face(m, base_curve.point(i + 1), f_next));
      }
      Vec2 u = b1 - a, v = c2 - b2;
      if (u.norm() < 1e-14 || v.norm() < 1e-14) continue;
      double turn = std::abs(std::remainder(v.angle() - u.angle(), 2 * M_PI));
      if (turn > 8 * m.tolerances().tol_angle) breaks.push_back(cum[i]);
    }
    breaks.push_back(base_curve.length());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [&](double a, double b) { return b - a < 8 * m.snap_eps(); }),
                 breaks.end());
    std::vector<GeodesicPath> edges;
    for (size_t i = 0; i + 1 < breaks.size(); i++) {
      auto sub = base_curve.sub_arclength(m, breaks[i], breaks[i + 1]);
      edges.push_back({sub, certify_path(m, sub)});
    }
    if (edges.empty()) throw Error("shortest_enclosing_curve: degenerate cycle");
    auto Q = make_polygon(m, edges);
    // Orient so that Q contains K.
    const auto& T0 = K.cc->tri(K.region_tris[0]);
    Vec2 c0 = (T0.pos[0] + T0.pos[1] + T0.pos[2]) / 3.0;
    auto probe = point_from_pos(m, T0.base_face, c0);
    if (!Q.contains(m, probe)) {
      std::vector<GeodesicPath> rev;
      for (auto it = edges.rbegin(); it != edges.rend(); ++it)
        rev.push_back({it->curve.reversed(), it->cert});
      Q = make_polygon(m, rev);
      if (!Q.contains(m, probe))
        throw Error("shortest_enclosing_curve: cycle does not enclose K");
    }
    return Q;
  };
  PolygonRegion Q = build_polygon(base_cycle);
  if (Q.perimeter() > K.perimeter() + std::max(m.tol_len(), 64 * m.snap_eps()))
    throw Error("shortest_enclosing_curve: cycle longer than the input boundary");
  return Q;
}

GeodesicPath extremal_geodesic(MeshContext& ctx, const std::vector<GeodesicPath>& candidates,
                               const PolygonRegion& frame, const SurfacePoint& toward) {
  const auto& m = ctx.mesh();
  if (candidates.empty()) throw Error("extremal_geodesic: no candidates");
  double best_area = 1e300;
  int best = -1;
  for (size_t i = 0; i < candidates.size(); i++) {
    // Region between the candidate and the frame boundary containing
    // `toward`: cut the frame along the candidate.
    SurfaceCurve b = frame.boundary_curve(m);
    CutComplex cc = CutComplex::build(m, {b, candidates[i].curve});
    auto rs = cc.regions({0, 1});
    auto at = cc.locate_all(toward);
    if (at.empty()) continue;
    int rid = rs.region_of_tri[at[0]];
    double area = 0;
    for (int t : rs.regions[rid].tris) {
      const auto& T = cc.tri(t);
      Vec2 c2 = (T.pos[0] + T.pos[1] + T.pos[2]) / 3.0;
      if (frame.contains(m, point_from_pos(m, T.base_face, c2))) area += cc.tri(t).area;
    }
    if (area < best_area - m.tol_area() ||
        (std::abs(area - best_area) <= m.tol_area() && best >= 0 &&
         candidates[i].length() < candidates[best].length())) {
      best_area = area;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw Error("extremal_geodesic: no candidate encloses the target side");
  return candidates[best];
}

CertifiedPolygon absolutely_convex_hull(MeshContext& ctx, const PolygonRegion& P,
                                        const SurfacePoint& x, double eps) {
  const auto& m = ctx.mesh();
  double r = std::min(eps / 2, ctx.diameter().lower / 6 * 0.98);
  auto U = make_disk_neighborhood(ctx, x, r);
  double zeta = r / 5;
  double theta_min = std::min(m.min_positive_cone_defect_angle(), 2 * M_PI);
  double delta = zeta * theta_min / (theta_min + 1);
  if (P.perimeter() > delta + m.tol_len())
    throw Error("absolutely_convex_hull: perimeter exceeds the separation bound");

  PolygonRegion Q = shortest_enclosing_curve(ctx, P, *U);
  ConvexityParams cparams;
  CertifiedPolygon out;
  out.ambient = U;
  out.region = Q;
  out.cert = certify_boundary_convex(ctx, out.region, *U, cparams);

  // Complete-convexity enlargement loop.
  for (int iter = 0; iter < 64; iter++) {
    auto probe = is_completely_convex(ctx, out.region, *U, out.region.perimeter() / 10);
    if (probe.convex) return out;
    const auto& esc = probe.escaping;
    // Maximal excursion of the escaping geodesic outside Q.
    SurfaceCurve b = out.region.boundary_curve(m);
    auto contacts = curve_contacts(m, esc.curve, b);
    if (contacts.empty()) throw EnlargementDiverged("escaping geodesic misses the boundary");
    std::vector<std::pair<double, double>> spans;  // param intervals on esc
    {
      std::vector<std::pair<double, double>> evs;
      for (auto& ev : contacts.events) evs.push_back({ev.a0, ev.a1});
      std::sort(evs.begin(), evs.end());
      double cur = 0;
      for (auto& [a0, a1] : evs) {
        if (a0 > cur + 8 * m.snap_eps()) spans.push_back({cur, a0});
        cur = std::max(cur, a1);
      }
      if (esc.curve.length() > cur + 8 * m.snap_eps()) spans.push_back({cur, esc.curve.length()});
    }
    bool improved = false;
    for (auto [s0, s1] : spans) {
      auto midp = esc.curve.at_arclength(m, (s0 + s1) / 2);
      if (out.region.contains(m, midp)) continue;
      SurfaceCurve excursion = esc.curve.sub_arclength(m, s0, s1);
      // Replace the boundary arc homotopic to the excursion: try both arcs
      // between the endpoints, keep the enlargement that still contains Q.
      auto cum = b.cumulative_lengths();
      auto pa = excursion.front();
      auto pb = excursion.back();
      double ta = -1, tb = -1;
      for (size_t i = 0; i < b.points().size(); i++) {
        if (ta < 0 && same_point(m, b.point(i), pa, 32 * m.snap_eps())) ta = cum[i];
        if (tb < 0 && same_point(m, b.point(i), pb, 32 * m.snap_eps())) tb = cum[i];
      }
      if (ta < 0 || tb < 0) {
        // Endpoints between stored points: use contact parameters.
        for (auto& ev : contacts.events) {
          if (std::abs(ev.a0 - s0) <= 1e-9 || std::abs(ev.a1 - s0) <= 1e-9)
            ta = (std::abs(ev.a0 - s0) <= 1e-9) ? ev.b0 : ev.b1;
          if (std::abs(ev.a0 - s1) <= 1e-9 || std::abs(ev.a1 - s1) <= 1e-9)
            tb = (std::abs(ev.a0 - s1) <= 1e-9) ? ev.b0 : ev.b1;
        }
      }
      if (ta < 0 || tb < 0) continue;
      for (int which = 0; which < 2 && !improved; which++) {
        SurfaceCurve candidate;
        double lo = std::min(ta, tb), hi = std::max(ta, tb);
        SurfaceCurve arc_in = (which == 0) ? b.sub_arclength(m, lo, hi)
                                           : b.sub_arclength(m, hi, b.length())
                                                 .concatenated(m, b.sub_arclength(m, 0, lo),
                                                               16 * m.snap_eps());
        // New boundary: the other arc plus the excursion.
        SurfaceCurve other = (which == 0)
                                 ? b.sub_arclength(m, hi, b.length())
                                       .concatenated(m, b.sub_arclength(m, 0, lo),
                                                     16 * m.snap_eps())
                                 : b.sub_arclength(m, lo, hi);
        SurfaceCurve exc = excursion;
        // Orient the excursion to match: it must run from the endpoint at
        // the end of `other` back to its start.
        auto other_end = other.back();
        if (!same_point(m, other_end, exc.front(), 32 * m.snap_eps())) exc = exc.reversed();
        if (!same_point(m, other.back(), exc.front(), 32 * m.snap_eps())) continue;
        try {
          candidate = other.concatenated(m, exc, 32 * m.snap_eps());
        } catch (const Error&) {
          continue;
        }
        if (!candidate.is_closed(m, 32 * m.snap_eps())) continue;
        // Build and keep when it grows and still contains the old region.
        try {
          auto cand_path = shorten_closed_curve(m, candidate, 4);
          std::vector<GeodesicPath> edges{{cand_path.curve, cand_path.cert}};
          auto newQ = make_polygon(m, edges);
          const auto& T0 = out.region.cc->tri(out.region.region_tris[0]);
          Vec2 c0 = (T0.pos[0] + T0.pos[1] + T0.pos[2]) / 3.0;
          auto probe_pt = point_from_pos(m, T0.base_face, c0);
          if (!newQ.contains(m, probe_pt)) {
            std::vector<GeodesicPath> rev{{cand_path.curve.reversed(), cand_path.cert}};
            newQ = make_polygon(m, rev);
          }
          if (!newQ.contains(m, probe_pt)) continue;
          if (newQ.area < out.region.area + m.tol_area()) continue;
          auto cert = certify_boundary_convex(ctx, newQ, *U, cparams);
          out.region = std::move(newQ);
          out.cert = cert;
          improved = true;
        } catch (const Error&) {
          continue;
        }
      }
      if (improved) break;
    }
    if (!improved)
      throw EnlargementDiverged("absolutely_convex_hull: cannot enlarge past the witness");
  }
  throw EnlargementDiverged("absolutely_convex_hull: iteration cap reached");
}

} // namespace geotri
