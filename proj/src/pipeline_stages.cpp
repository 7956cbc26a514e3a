#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "geotri/errors.hpp"
#include "geotri/pipeline.hpp"

namespace geotri {

namespace {

SurfacePoint tri_centroid(const IntrinsicMesh& m, const CutComplex& cc, int t) {
  const auto& T = cc.tri(t);
  Vec2 c2 = (T.pos[0] + T.pos[1] + T.pos[2]) / 3.0;
  return point_from_pos(m, T.base_face, c2);
}

std::vector<SurfacePoint> coverage_net(const IntrinsicMesh& m, double spacing) {
  std::vector<SurfacePoint> net;
  for (int v = 0; v < m.vertex_count(); v++) net.push_back(SurfacePoint::vertex(v));
  for (int f = 0; f < m.face_count(); f++) {
    const auto& L = m.layout(f);
    double longest = std::max({dist(L[0], L[1]), dist(L[1], L[2]), dist(L[2], L[0])});
    int k = std::max(1, static_cast<int>(std::ceil(longest / spacing)));
    for (int i = 0; i <= k; i++)
      for (int j = 0; i + j <= k; j++) {
        double b0 = static_cast<double>(i) / k, b1 = static_cast<double>(j) / k;
        double b2 = 1 - b0 - b1;
        // Perturb interior samples off the lattice to dodge symmetric ties.
        Vec2 pos = L[0] * b0 + L[1] * b1 + L[2] * b2;
        net.push_back(point_from_pos(m, f, pos));
      }
  }
  // Deduplicate (vertices and edge points repeat across faces).
  std::vector<SurfacePoint> out;
  for (auto& p : net) {
    bool dup = false;
    for (auto& q : out)
      if (same_point(m, p, q, spacing / 8)) dup = true;
    if (!dup) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<CertifiedPolygon> cover_absolutely_convex(MeshContext& ctx,
                                                      const PipelineParams& params) {
  const auto& m = ctx.mesh();
  double eps_eff = std::min(params.epsilon, ctx.diameter().lower / 3 * 0.98);
  auto net = coverage_net(m, eps_eff / 2);

  std::vector<CertifiedPolygon> pool;
  auto covered = [&](const SurfacePoint& p) {
    for (const auto& q : pool)
      if (q.region.contains(m, p)) return true;
    return false;
  };
  auto grow_at = [&](const SurfacePoint& x, uint64_t salt) {
    auto fan = triangle_fan_cover(ctx, x, eps_eff, params.seed + salt);
    int added = 0;
    for (auto& T : fan.triangles) {
      try {
        auto Q = absolutely_convex_hull(ctx, T, x, eps_eff);
        // Deduplicate near-identical hulls.
        bool dup = false;
        for (const auto& have : pool)
          if (std::abs(have.region.area - Q.region.area) <= m.tol_area() &&
              std::abs(have.region.perimeter() - Q.region.perimeter()) <= 8 * m.snap_eps() &&
              have.region.contains(m, tri_centroid(m, *Q.region.cc, Q.region.region_tris[0])))
            dup = true;
        if (!dup) {
          pool.push_back(std::move(Q));
          added++;
        }
      } catch (const Error&) {
        continue;  // other fan triangles may still cover x
      }
    }
    return added;
  };

  for (size_t i = 0; i < net.size(); i++) {
    if (covered(net[i])) continue;
    grow_at(net[i], static_cast<uint64_t>(i));
    if (!covered(net[i]))
      throw StageFailure("cover: point " + net[i].describe() + " still uncovered");
  }

  // Exact coverage over the joint complex; plug any gaps.
  for (int round = 0; round < 8; round++) {
    std::vector<SurfaceCurve> boundaries;
    for (const auto& q : pool) boundaries.push_back(q.region.boundary_curve(m));
    CutComplex cc = CutComplex::build(m, boundaries);
    bool complete = true;
    for (int t = 0; t < cc.tri_count() && complete; t++) {
      auto p = tri_centroid(m, cc, t);
      if (!covered(p)) {
        complete = false;
        grow_at(p, 7777 + round);
        if (!covered(p)) throw StageFailure("cover: gap at " + p.describe());
      }
    }
    if (complete) break;
    if (round == 7) throw StageFailure("cover: gap plugging did not converge");
  }

  // Greedy sub-cover by decreasing area over the final joint complex.
  std::vector<SurfaceCurve> boundaries;
  for (const auto& q : pool) boundaries.push_back(q.region.boundary_curve(m));
  CutComplex cc = CutComplex::build(m, boundaries);
  std::vector<int> order(pool.size());
  for (size_t i = 0; i < order.size(); i++) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (pool[a].region.area != pool[b].region.area)
      return pool[a].region.area > pool[b].region.area;
    return pool[a].region.perimeter() < pool[b].region.perimeter();
  });
  std::vector<char> tri_covered(cc.tri_count(), 0);
  std::vector<SurfacePoint> probes;
  for (int t = 0; t < cc.tri_count(); t++) probes.push_back(tri_centroid(m, cc, t));
  std::vector<CertifiedPolygon> selected;
  int remaining = cc.tri_count();
  for (int idx : order) {
    if (remaining == 0) break;
    int news = 0;
    for (int t = 0; t < cc.tri_count(); t++)
      if (!tri_covered[t] && pool[idx].region.contains(m, probes[t])) news++;
    if (news == 0) continue;
    for (int t = 0; t < cc.tri_count(); t++)
      if (!tri_covered[t] && pool[idx].region.contains(m, probes[t])) {
        tri_covered[t] = 1;
        remaining--;
      }
    selected.push_back(pool[idx]);
  }
  if (remaining != 0) throw StageFailure("cover: greedy selection left gaps");
  return selected;
}

std::vector<CertifiedPolygon> refine_cover_to_finite_graph(MeshContext& ctx,
                                                           std::vector<CertifiedPolygon> cover) {
  const auto& m = ctx.mesh();
  std::vector<CertifiedPolygon> out;
  std::vector<GeodesicPath> edge_pool;  // edges of accepted polygons
  for (size_t k = 0; k < cover.size(); k++) {
    CertifiedPolygon& P = cover[k];
    if (k == 0) {
      for (const auto& e : P.region.edges) edge_pool.push_back(e);
      out.push_back(std::move(P));
      continue;
    }
    // Replace each edge so the union of all edges is a finite graph.
    std::vector<GeodesicPath> stars;
    for (const auto& e : P.region.edges) {
      auto estar = normalize_to_finite_graph(m, edge_pool, e);
      // Complete convexity of P keeps the replacement inside P.
      for (int s = 0; s <= 8; s++) {
        auto pt = estar.curve.at_arclength(m, estar.curve.length() * s / 8);
        if (!P.region.contains(m, pt))
          throw StageFailure("refine: replaced edge left its polygon");
      }
      stars.push_back(std::move(estar));
    }
    // Subdivide P along the replaced edges.
    std::vector<SurfaceCurve> curves{P.region.boundary_curve(m)};
    for (const auto& e : stars) curves.push_back(e.curve);
    CutComplex cc = CutComplex::build(m, curves);
    std::vector<int> walls;
    for (size_t i = 0; i < curves.size(); i++) walls.push_back(static_cast<int>(i));
    auto rs = cc.regions(walls);
    std::vector<SurfacePoint> breaks;
    for (const auto& v : P.region.vertices) breaks.push_back(v);
    for (const auto& e : stars) {
      breaks.push_back(e.curve.front());
      breaks.push_back(e.curve.back());
    }
    for (const auto& r : rs.regions) {
      auto probe = tri_centroid(m, cc, r.tris[0]);
      if (!P.region.contains(m, probe)) continue;
      // Drop components touching the old boundary away from the new edges.
      bool touches_old = false;
      for (auto& loop : r.boundary_loops)
        for (auto& [sid, dir] : loop) {
          const auto& s = cc.side(sid);
          bool on_star = false;
          for (int cgi : s.curves)
            if (cgi >= 1) on_star = true;
          if (!on_star && s.curves.count(0)) touches_old = true;
        }
      if (touches_old) {
        // Must be contained in an earlier polygon.
        bool inside_earlier = false;
        for (const auto& q : out)
          if (q.region.contains(m, probe)) inside_earlier = true;
        if (!inside_earlier)
          throw StageFailure("refine: dropped component is not inside an earlier polygon");
        continue;
      }
      if (r.boundary_loops.size() != 1)
        throw StageFailure("refine: kept component is not a disk");
      auto edges = structure_boundary(m, cc, r.boundary_loops[0], breaks);
      CertifiedPolygon q;
      q.region = make_polygon(m, edges);
      if (!q.region.contains(m, probe)) {
        std::vector<GeodesicPath> rev;
        for (auto it = edges.rbegin(); it != edges.rend(); ++it)
          rev.push_back({it->curve.reversed(), it->cert});
        q.region = make_polygon(m, rev);
      }
      q.ambient = P.ambient;
      q.cert = certify_boundary_convex(ctx, q.region, *q.ambient);
      out.push_back(std::move(q));
    }
    for (auto& e : stars) edge_pool.push_back(std::move(e));
  }
  return out;
}

namespace {

// Merge one polygon into a set of non-overlapping certified polygons.
void merge_one(MeshContext& ctx, std::vector<CertifiedPolygon>& acc, CertifiedPolygon P) {
  const auto& m = ctx.mesh();
  // Split off the polygons that overlap P.
  std::vector<CertifiedPolygon> untouched, overlapping;
  for (auto& q : acc) {
    auto comps = intersect_boundary_convex(ctx, q, P);
    bool overlaps = false;
    for (auto& w : comps)
      if (w.region.area > m.tol_area()) overlaps = true;
    (overlaps ? overlapping : untouched).push_back(std::move(q));
  }
  if (overlapping.empty()) {
    acc = std::move(untouched);
    acc.push_back(std::move(P));
    return;
  }

  // Corner chains: for each overlap component, connect consecutive vertices
  // of its boundary by geodesics inside it.
  std::vector<GeodesicPath> chains;
  std::vector<GeodesicPath> edge_pool;
  for (auto& q : overlapping)
    for (auto& e : q.region.edges) edge_pool.push_back(e);
  for (auto& e : P.region.edges) edge_pool.push_back(e);
  for (auto& q : overlapping) {
    auto comps = intersect_boundary_convex(ctx, q, P);
    for (auto& w : comps) {
      auto rm = w.region.make_region_mesh();
      int nv = static_cast<int>(w.region.edges.size());
      if (nv <= 1) continue;  // the component boundary is a single closed arc
      for (int l = 0; l < nv; l++) {
        const auto& arc = w.region.edges[l];
        SurfaceCurve mapped = rm->to_region(arc.curve);
        auto inner = shortest_homotopic(rm->mesh(), mapped);
        auto chain = GeodesicPath{rm->to_base(inner.curve), {}};
        chain.cert = certify_path(m, chain.curve);
        chain = normalize_to_finite_graph(m, edge_pool, chain);
        chains.push_back(chain);
        edge_pool.push_back(chain);
      }
    }
  }

  // Graph: all boundaries plus chains; boundary sides strictly inside another
  // polygon are deleted.
  std::vector<SurfaceCurve> curves;
  std::vector<const CertifiedPolygon*> owners;
  for (auto& q : overlapping) {
    curves.push_back(q.region.boundary_curve(m));
    owners.push_back(&q);
  }
  curves.push_back(P.region.boundary_curve(m));
  owners.push_back(&P);
  int n_bound = static_cast<int>(curves.size());
  for (auto& c : chains) curves.push_back(c.curve);
  CutComplex cc = CutComplex::build(m, curves);

  auto strictly_inside_other = [&](int sid) {
    const auto& s = cc.side(sid);
    // Midpoint of the side.
    const auto& T = cc.tri(s.tri0);
    Vec2 mid = (T.pos[s.side0] + T.pos[(s.side0 + 1) % 3]) * 0.5;
    auto mp = point_from_pos(m, T.base_face, mid);
    for (int k = 0; k < n_bound; k++) {
      if (s.curves.count(k)) continue;  // its own boundary
      if (owners[k]->region.contains_interior(m, mp, 4 * m.snap_eps())) return true;
    }
    return false;
  };
  auto rs = cc.regions_by_predicate([&](int sid) {
    const auto& s = cc.side(sid);
    if (s.curves.empty()) return false;
    bool chain_side = false, boundary_side = false;
    for (int cgi : s.curves)
      (cgi >= n_bound ? chain_side : boundary_side) = true;
    if (chain_side) return true;
    return boundary_side && !strictly_inside_other(sid);
  });

  std::vector<SurfacePoint> breaks;
  for (int k = 0; k < n_bound; k++)
    for (const auto& v : owners[k]->region.vertices) breaks.push_back(v);
  for (const auto& c : chains) {
    breaks.push_back(c.curve.front());
    breaks.push_back(c.curve.back());
  }

  std::vector<CertifiedPolygon> result = std::move(untouched);
  for (const auto& r : rs.regions) {
    auto probe = tri_centroid(m, cc, r.tris[0]);
    bool inside_any = false;
    const CertifiedPolygon* container = nullptr;
    for (int k = 0; k < n_bound; k++)
      if (owners[k]->region.contains(m, probe)) {
        inside_any = true;
        container = owners[k];
        break;
      }
    if (!inside_any) continue;
    if (r.boundary_loops.size() != 1)
      throw StageFailure("non-overlap: component is not a disk");
    auto edges = structure_boundary(m, cc, r.boundary_loops[0], breaks);
    CertifiedPolygon q;
    q.region = make_polygon(m, edges);
    if (!q.region.contains(m, probe)) {
      std::vector<GeodesicPath> rev;
      for (auto it = edges.rbegin(); it != edges.rend(); ++it)
        rev.push_back({it->curve.reversed(), it->cert});
      q.region = make_polygon(m, rev);
    }
    q.ambient = container->ambient;
    q.cert = certify_boundary_convex(ctx, q.region, *q.ambient);
    result.push_back(std::move(q));
  }
  acc = std::move(result);
}

}  // namespace

std::vector<CertifiedPolygon> make_non_overlapping(MeshContext& ctx,
                                                   std::vector<CertifiedPolygon> cover) {
  std::vector<CertifiedPolygon> acc;
  for (auto& P : cover) {
    if (acc.empty()) {
      acc.push_back(std::move(P));
      continue;
    }
    merge_one(ctx, acc, std::move(P));
  }
  return acc;
}

CertifiedPolygon consolidate_polygon(MeshContext& ctx, const CertifiedPolygon& P) {
  const auto& m = ctx.mesh();
  double tol_angle = m.tolerances().tol_angle;
  std::vector<GeodesicPath> edges = P.region.edges;
  bool merged = true;
  while (merged && edges.size() > 1) {
    merged = false;
    for (size_t i = 0; i < edges.size(); i++) {
      size_t j = (i + 1) % edges.size();
      auto cat = edges[i].curve.concatenated(m, edges[j].curve, 16 * m.snap_eps());
      auto cert = certify_path(m, cat);
      if (cert.valid(tol_angle * 4)) {
        GeodesicPath e{cat, cert};
        std::vector<GeodesicPath> next;
        for (size_t k = 0; k < edges.size(); k++) {
          if (k == i) next.push_back(e);
          else if (k != j) next.push_back(edges[k]);
        }
        edges = std::move(next);
        merged = true;
        break;
      }
    }
  }
  if (edges.size() == P.region.edges.size()) return P;
  CertifiedPolygon out;
  out.region = make_polygon(m, edges);
  out.ambient = P.ambient;
  out.cert = P.cert;
  return out;
}

TriangleMetrics triangle_metrics(MeshContext& ctx, const PolygonRegion& T) {
  const auto& m = ctx.mesh();
  auto& g = ctx.graph(16);
  TriangleMetrics out;
  int n = static_cast<int>(T.edges.size());
  for (int i = 0; i < n; i++) {
    auto sp = shortest_path(m, g, T.edges[i].curve.front(), T.edges[i].curve.back());
    out.sides.push_back(sp.length());
  }
  if (n == 3) {
    out.slack = 1e300;
    for (int i = 0; i < 3; i++)
      out.slack = std::min(out.slack,
                           out.sides[(i + 1) % 3] + out.sides[(i + 2) % 3] - out.sides[i]);
  } else {
    out.slack = 0;  // bigons and monogons are degenerate by definition
  }
  return out;
}

std::vector<CertifiedPolygon> triangulate_polygon(MeshContext& ctx, const CertifiedPolygon& Pin) {
  const auto& m = ctx.mesh();
  auto P = consolidate_polygon(ctx, Pin);
  int k = static_cast<int>(P.region.edges.size());
  if (k <= 3) return {P};
  // Diagonal between non-consecutive vertices, shortest within P and free of
  // superfluous intersections with the boundary.
  int vi = 0, wi = k / 2;
  auto rm = P.region.make_region_mesh();
  SurfacePoint v = P.region.vertices[vi];
  SurfacePoint w = P.region.vertices[wi];
  // Boundary arc from v to w inside the region gives the homotopy class.
  SurfaceCurve b = P.region.boundary_curve(m);
  auto cum = b.cumulative_lengths();
  double sv = 0, sw = 0;
  {
    double acc = 0;
    for (int i = 0; i < k; i++) {
      if (i == vi) sv = acc;
      if (i == wi) sw = acc;
      acc += P.region.edges[i].curve.length();
    }
  }
  SurfaceCurve arc = b.sub_arclength(m, std::min(sv, sw), std::max(sv, sw));
  SurfaceCurve mapped = rm->to_region(arc);
  auto inner = shortest_homotopic(rm->mesh(), mapped);
  // Remove superfluous intersections against the boundary edges, inside P.
  std::vector<GeodesicPath> red_edges;
  for (const auto& e : P.region.edges) {
    auto mc = rm->to_region(e.curve);
    red_edges.push_back({mc, certify_path(rm->mesh(), mc)});
  }
  inner = remove_superfluous_from(rm->mesh(), inner, red_edges);
  GeodesicPath gamma{rm->to_base(inner.curve), {}};
  gamma.cert = certify_path(m, gamma.curve);

  auto parts = split_by_geodesic(ctx, P, gamma);
  if (parts.size() < 2) throw StageFailure("triangulate_polygon: diagonal did not split");
  std::vector<CertifiedPolygon> out;
  for (auto& part : parts) {
    if (static_cast<int>(part.region.edges.size()) >= k) {
      part = consolidate_polygon(ctx, part);
      if (static_cast<int>(part.region.edges.size()) >= k)
        throw StageFailure("triangulate_polygon: no vertex-count progress");
    }
    auto sub = triangulate_polygon(ctx, part);
    for (auto& s : sub) out.push_back(std::move(s));
  }
  return out;
}

} // namespace geotri
