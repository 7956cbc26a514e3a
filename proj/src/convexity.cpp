#include "geotri/convexity.hpp"

#include <array>

#include <algorithm>
#include <cmath>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

std::shared_ptr<DiskNeighborhood> make_disk_neighborhood(MeshContext& ctx,
                                                         const SurfacePoint& center,
                                                         double radius, int graph_n) {
  auto U = std::make_shared<DiskNeighborhood>();
  U->center = center;
  U->radius = radius;
  U->graph = ctx.graph_ptr(graph_n);
  U->center_field = U->graph->distance_field({center});
  U->diam_upper = 2 * radius;
  // Pinch probe: a non-contractible loop through the center shorter than the
  // ball circumference would identify boundary points of the ball.
  auto loops = all_geodesics_between(ctx.mesh(), center, center, 2 * radius * 1.02);
  for (const auto& l : loops)
    if (l.length() > 8 * ctx.mesh().snap_eps())
      throw NotADisk("ball radius exceeds half the shortest loop through the center");
  return U;
}

namespace {

double max_center_distance_over(const PolygonRegion& K, const DiskNeighborhood& U) {
  double best = 0, tri_diam = 0;
  std::set<int> nodes;
  for (int t : K.region_tris) {
    const auto& T = K.cc->tri(t);
    for (int j = 0; j < 3; j++) {
      nodes.insert(T.nodes[j]);
      tri_diam = std::max(tri_diam, dist(T.pos[j], T.pos[(j + 1) % 3]));
    }
  }
  for (int n : nodes) best = std::max(best, U.dist_from_center(K.cc->node_point(n)));
  return best + tri_diam;  // Lipschitz slack for points between nodes
}

// Uniform arclength net: arcs must be able to span polygon corners, or a
// reflex kink would never be compared against its outside chord.
std::vector<double> boundary_breaks(const PolygonRegion& K, int pieces) {
  double perimeter = K.perimeter();
  std::vector<double> breaks;
  for (int i = 0; i <= pieces; i++) breaks.push_back(perimeter * i / pieces);
  return breaks;
}

} // namespace

std::shared_ptr<RegionMesh> annulus_region(MeshContext& ctx, const PolygonRegion& K,
                                           const DiskNeighborhood& U) {
  const auto& m = ctx.mesh();
  const auto& cc = *K.cc;
  std::set<int> inside(K.region_tris.begin(), K.region_tris.end());
  // Complement triangles within the ball, connected to the boundary of K.
  std::set<int> allowed;
  for (int t = 0; t < cc.tri_count(); t++) {
    if (inside.count(t)) continue;
    const auto& T = cc.tri(t);
    // A triangle participates when any corner reaches into the ball;
    // complement triangles can be much larger than the ball itself.
    double best = 1e300;
    for (int j = 0; j < 3; j++) {
      auto cp = point_from_pos(m, T.base_face, T.pos[j]);
      best = std::min(best, U.dist_from_center(cp));
    }
    if (best <= U.radius) allowed.insert(t);
  }
  // Seed BFS from triangles adjacent to K across its boundary.
  std::vector<int> stack;
  std::set<int> picked;
  for (int t : K.region_tris)
    for (int j = 0; j < 3; j++) {
      int n = cc.neighbor(t, j);
      if (n >= 0 && allowed.count(n) && !picked.count(n)) {
        picked.insert(n);
        stack.push_back(n);
      }
    }
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    for (int j = 0; j < 3; j++) {
      int n = cc.neighbor(t, j);
      if (n >= 0 && allowed.count(n) && !picked.count(n)) {
        picked.insert(n);
        stack.push_back(n);
      }
    }
  }
  if (picked.empty()) throw NotContained("annulus region around K is empty");
  return std::make_shared<RegionMesh>(K.cc, std::vector<int>(picked.begin(), picked.end()));
}

BoundaryConvexCertificate certify_boundary_convex(MeshContext& ctx, const PolygonRegion& K,
                                                  const DiskNeighborhood& U,
                                                  const ConvexityParams& params) {
  const auto& m = ctx.mesh();
  double tol = params.tol_len > 0 ? params.tol_len : m.tol_len();
  BoundaryConvexCertificate cert;
  cert.perimeter = K.perimeter();
  cert.margin_lower = U.radius - max_center_distance_over(K, U);
  cert.diam_U_upper = U.diam_upper;
  cert.diam_X_lower = ctx.diameter().lower;

  cert.cond1_ok = cert.margin_lower > 4 * cert.perimeter;
  if (!cert.cond1_ok && params.throw_on_fail)
    throw Condition1Failed("margin " + std::to_string(cert.margin_lower) + " vs 4*perimeter " +
                           std::to_string(4 * cert.perimeter));
  cert.cond2_ok = cert.diam_U_upper <= cert.diam_X_lower / 3 + tol;
  if (!cert.cond2_ok && params.throw_on_fail)
    throw Condition2Failed("diam(U) " + std::to_string(cert.diam_U_upper) + " vs diam(X)/3 " +
                           std::to_string(cert.diam_X_lower / 3));

  auto annulus = annulus_region(ctx, K, U);
  SurfaceCurve boundary = K.boundary_curve(m);
  auto breaks = boundary_breaks(K, std::max(4, static_cast<int>(params.h_arc_div)));
  cert.cond3_ok = true;
  double slack = std::max(tol, 32 * m.snap_eps());
  for (size_t i = 0; i + 1 < breaks.size(); i++) {
    BoundaryConvexCertificate::Cond3 c;
    c.s0 = breaks[i];
    c.s1 = breaks[i + 1];
    SurfaceCurve arc = boundary.sub_arclength(m, c.s0, c.s1);
    c.arc_len = arc.length();
    if (c.arc_len <= 8 * m.snap_eps()) continue;
    // Arcs along the mesh boundary have no room on the outside: the annulus
    // pinches there, and only the interior sub-arcs can be beaten.
    auto runs = mesh_boundary_runs(m, arc);
    double competitor_total = 0;
    bool mapped_ok = true;
    for (auto& r : runs) {
      SurfaceCurve piece = arc.sub_arclength(m, r[0], r[1]);
      if (r[2] > 0.5) {
        competitor_total += piece.length();
        continue;
      }
      try {
        SurfaceCurve mapped = annulus->to_region(piece);
        auto competitor = shortest_homotopic(annulus->mesh(), mapped);
        competitor_total += competitor.length();
      } catch (const Error&) {
        mapped_ok = false;
        break;
      }
    }
    if (!mapped_ok) {
      cert.cond3_ok = false;
      if (params.throw_on_fail)
        throw Condition3Failed("arc could not be compared inside the annulus");
      continue;
    }
    c.competitor_len = competitor_total;
    c.ok = c.arc_len <= c.competitor_len + slack;
    if (!c.ok) {
      cert.cond3_ok = false;
      if (params.throw_on_fail)
        throw Condition3Failed("arc [" + std::to_string(c.s0) + ", " + std::to_string(c.s1) +
                               "] of length " + std::to_string(c.arc_len) +
                               " has a shorter homotopic competitor " +
                               std::to_string(c.competitor_len));
    }
    cert.cond3.push_back(c);
  }
  return cert;
}

CompleteConvexityResult is_completely_convex(MeshContext& ctx, const PolygonRegion& K,
                                             const DiskNeighborhood& U, double h_net) {
  const auto& m = ctx.mesh();
  CompleteConvexityResult out;
  out.convex = true;
  // Net: boundary samples plus interior triangle nodes, thinned to h_net.
  std::vector<SurfacePoint> net;
  SurfaceCurve boundary = K.boundary_curve(m);
  int nb = std::max(4, static_cast<int>(std::ceil(boundary.length() / h_net)));
  nb = std::min(nb, 24);
  for (int i = 0; i < nb; i++) net.push_back(boundary.at_arclength(m, boundary.length() * i / nb));
  {
    std::set<int> used;
    for (int t : K.region_tris) {
      const auto& T = K.cc->tri(t);
      Vec2 c2 = (T.pos[0] + T.pos[1] + T.pos[2]) / 3.0;
      auto cp = point_from_pos(m, T.base_face, c2);
      bool close = false;
      for (const auto& q : net)
        if (same_point(m, cp, q, h_net / 2)) close = true;
      if (!close && K.contains(m, cp)) net.push_back(cp);
      if (net.size() > 40) break;
      (void)used;
    }
  }
  auto& g = ctx.graph(16);
  double slack = std::max(m.tol_len(), 32 * m.snap_eps());
  for (size_t i = 0; i < net.size() && out.convex; i++) {
    for (size_t j = i + 1; j < net.size() && out.convex; j++) {
      auto sp = shortest_path(m, g, net[i], net[j]);
      double d = sp.length();
      if (d <= 8 * m.snap_eps()) continue;
      int cap = std::max(16, static_cast<int>(std::ceil(4 * K.perimeter() / d)));
      auto all = all_geodesics_between(m, net[i], net[j], d + slack, cap);
      for (const auto& gd : all) {
        bool inside = true;
        for (int s = 0; s < gd.curve.segment_count() && inside; s++) {
          int f = gd.curve.segment_face(s);
          Vec2 a = pos_in_face(m, gd.curve.point(s), f);
          Vec2 b = pos_in_face(m, gd.curve.point(s + 1), f);
          auto mid = point_from_pos(m, f, (a + b) * 0.5);
          if (!K.contains(m, mid)) inside = false;
          if (!K.contains(m, gd.curve.point(s))) inside = false;
        }
        if (!inside) {
          out.convex = false;
          out.witness_a = net[i];
          out.witness_b = net[j];
          out.escaping = gd;
          break;
        }
      }
    }
  }
  (void)U;
  return out;
}

std::vector<GeodesicPath> structure_boundary(const IntrinsicMesh& m, const CutComplex& cc,
                                             const std::vector<std::pair<int, int>>& loop,
                                             const std::vector<SurfacePoint>& extra_breaks) {
  int n = static_cast<int>(loop.size());
  // Breakpoint flags per loop node (head of each directed side).
  std::vector<bool> brk(n, false);
  auto head_node = [&](int i) {
    auto [sid, dir] = loop[i];
    const auto& s = cc.side(sid);
    return dir > 0 ? s.node_b : s.node_a;
  };
  for (int i = 0; i < n; i++) {
    const auto& cur = cc.side(loop[i].first).curves;
    const auto& nxt = cc.side(loop[(i + 1) % n].first).curves;
    if (cur != nxt) brk[i] = true;
    SurfacePoint hp = cc.node_point(head_node(i));
    for (const auto& b : extra_breaks)
      if (same_point(m, hp, b, 16 * m.snap_eps())) brk[i] = true;
  }
  int start = -1;
  for (int i = 0; i < n; i++)
    if (brk[i]) start = (i + 1) % n;
  std::vector<GeodesicPath> out;
  if (start < 0) {
    // Single closed geodesic edge.
    auto curve = cc.walk_curve(loop);
    out.push_back({curve, certify_path(m, curve)});
    return out;
  }
  std::vector<std::pair<int, int>> arc;
  for (int k = 0; k < n; k++) {
    int i = (start + k) % n;
    arc.push_back(loop[i]);
    if (brk[i]) {
      auto curve = cc.walk_curve(arc);
      out.push_back({curve, certify_path(m, curve)});
      arc.clear();
    }
  }
  if (!arc.empty()) {
    auto curve = cc.walk_curve(arc);
    out.push_back({curve, certify_path(m, curve)});
  }
  return out;
}

std::vector<GeodesicPath> structure_boundary(const IntrinsicMesh& m, const CutComplex& cc,
                                             const std::vector<std::pair<int, int>>& loop) {
  return structure_boundary(m, cc, loop, {});
}

namespace {

// Components of the refined complex inside both polygons, as new polygons.
std::vector<PolygonRegion> interior_intersection_components(const IntrinsicMesh& m,
                                                            const PolygonRegion& K1,
                                                            const PolygonRegion& K2,
                                                            std::vector<SurfacePoint> breaks) {
  SurfaceCurve b1 = K1.boundary_curve(m);
  SurfaceCurve b2 = K2.boundary_curve(m);
  auto cc = std::make_shared<CutComplex>(CutComplex::build(m, {b1, b2}));
  auto rs = cc->regions({0, 1});
  std::vector<PolygonRegion> out;
  for (const auto& r : rs.regions) {
    // Inside both?
    const auto& T = cc->tri(r.tris[0]);
    Vec2 c2 = (T.pos[0] + T.pos[1] + T.pos[2]) / 3.0;
    auto cp = point_from_pos(m, T.base_face, c2);
    if (!K1.contains(m, cp) || !K2.contains(m, cp)) continue;
    if (r.boundary_loops.size() != 1) continue;  // skip exotic components
    auto edges = structure_boundary(m, *cc, r.boundary_loops[0], breaks);
    out.push_back(make_polygon(m, std::move(edges)));
  }
  return out;
}

} // namespace

std::vector<CertifiedPolygon> intersect_boundary_convex(MeshContext& ctx,
                                                        const CertifiedPolygon& K1in,
                                                        const CertifiedPolygon& K2in) {
  const auto& m = ctx.mesh();
  const CertifiedPolygon* K1 = &K1in;
  const CertifiedPolygon* K2 = &K2in;
  if (K1->region.perimeter() < K2->region.perimeter()) std::swap(K1, K2);
  double tol = std::max(m.tol_len(), 32 * m.snap_eps());

  std::vector<SurfacePoint> breaks;
  for (const auto& v : K1->region.vertices) breaks.push_back(v);
  for (const auto& v : K2->region.vertices) breaks.push_back(v);
  auto comps = interior_intersection_components(m, K1->region, K2->region, breaks);
  std::vector<CertifiedPolygon> out;
  for (auto& W : comps) {
    // Nested shortcut: the component equal to K2 keeps its certificate.
    if (std::abs(W.area - K2->region.area) <= m.tol_area() &&
        std::abs(W.perimeter() - K2->region.perimeter()) <= tol) {
      out.push_back(*K2);
      continue;
    }
    CertifiedPolygon cw;
    cw.region = std::move(W);
    cw.ambient = K1->ambient;
    cw.cert = certify_boundary_convex(ctx, cw.region, *cw.ambient);
    if (cw.region.perimeter() > K2->region.perimeter() + tol)
      throw Error("intersect_boundary_convex: component perimeter exceeds the smaller input");
    out.push_back(std::move(cw));
  }
  return out;
}

std::vector<CertifiedPolygon> split_by_geodesic(MeshContext& ctx, const CertifiedPolygon& P,
                                                const GeodesicPath& gamma) {
  const auto& m = ctx.mesh();
  for (const auto& endpoint : {gamma.curve.front(), gamma.curve.back()})
    if (P.region.contains_interior(m, endpoint, 4 * m.snap_eps()))
      throw GeodesicEndpointInside("splitting geodesic endpoint lies in the interior");

  SurfaceCurve b = P.region.boundary_curve(m);
  auto cc = std::make_shared<CutComplex>(CutComplex::build(m, {b, gamma.curve}));
  auto rs = cc->regions({0, 1});
  std::vector<SurfacePoint> breaks;
  for (const auto& v : P.region.vertices) breaks.push_back(v);
  breaks.push_back(gamma.curve.front());
  breaks.push_back(gamma.curve.back());
  std::vector<CertifiedPolygon> out;
  for (const auto& r : rs.regions) {
    const auto& T = cc->tri(r.tris[0]);
    Vec2 c2 = (T.pos[0] + T.pos[1] + T.pos[2]) / 3.0;
    auto cp = point_from_pos(m, T.base_face, c2);
    if (!P.region.contains(m, cp)) continue;
    if (r.boundary_loops.size() != 1)
      throw Error("split_by_geodesic: component is not a disk");
    auto edges = structure_boundary(m, *cc, r.boundary_loops[0], breaks);
    CertifiedPolygon q;
    q.region = make_polygon(m, std::move(edges));
    q.ambient = P.ambient;
    q.cert = certify_boundary_convex(ctx, q.region, *q.ambient);
    out.push_back(std::move(q));
  }
  return out;
}

} // namespace geotri
