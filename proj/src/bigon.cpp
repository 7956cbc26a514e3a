#include <algorithm>
#include <chrono>
#include <cmath>

#include "geotri/errors.hpp"
#include "geotri/pipeline.hpp"

namespace geotri {

namespace {

// Whether the polygon boundary is locally geodesic at vertex `idx`: the walk
// (end of the incoming edge, the vertex, start of the outgoing edge) has a
// valid local-shortness certificate.
bool locally_geodesic_at(const IntrinsicMesh& m, const PolygonRegion& B, int idx) {
  int n = static_cast<int>(B.edges.size());
  const auto& in_e = B.edges[(idx + n - 1) % n];
  const auto& out_e = B.edges[idx];
  double trim = std::min(in_e.curve.length(), out_e.curve.length()) / 4;
  trim = std::min(trim, 8 * m.max_edge_length());
  auto tail = in_e.curve.sub_arclength(m, in_e.curve.length() - trim, in_e.curve.length());
  auto head = out_e.curve.sub_arclength(m, 0, trim);
  auto walk = tail.concatenated(m, head, 16 * m.snap_eps());
  auto cert = certify_path(m, walk);
  return cert.valid(m.tolerances().tol_angle * 8);
}

struct BigonData {
  SurfacePoint b, t;
  GeodesicPath L, R;  // both from b to t
  double a = 0;       // common side length
};

BigonData bigon_data(const IntrinsicMesh& m, const PolygonRegion& B) {
  if (B.edges.size() != 2) throw Error("bigon_data: not a bigon");
  BigonData d;
  d.b = B.vertices[0];
  d.t = B.vertices[1];
  d.L = B.edges[0];  // b -> t
  d.R = {B.edges[1].curve.reversed(), B.edges[1].cert};  // b -> t
  double la = d.L.curve.length(), ra = d.R.curve.length();
  if (std::abs(la - ra) > std::max(m.tol_len(), 64 * m.snap_eps()) * 4)
    throw Error("bigon_data: side lengths differ; sides are not both geodesics");
  d.a = (la + ra) / 2;
  return d;
}

TriangleElement finalize_triangle(MeshContext& ctx, CertifiedPolygon Q, const char* provenance,
                                  const PipelineParams& params) {
  TriangleElement out;
  auto metrics = triangle_metrics(ctx, Q.region);
  out.side_lengths = metrics.sides;
  out.nondegeneracy_slack = metrics.slack;
  out.diameter = region_diameter(*Q.region.cc, Q.region.region_tris, params.net_spacing());
  out.region = std::move(Q.region);
  out.ambient = std::move(Q.ambient);
  out.cert = std::move(Q.cert);
  out.provenance = provenance;
  return out;
}

}  // namespace

std::vector<TriangleElement> split_bigon_nondegenerate(MeshContext& ctx,
                                                       const CertifiedPolygon& Bin,
                                                       const PipelineParams& params, int depth) {
  const auto& m = ctx.mesh();
  if (depth > 64) throw BigonSplitDiverged("bigon recursion exceeded the depth cap");
  auto B = consolidate_polygon(ctx, Bin);
  int k = static_cast<int>(B.region.edges.size());
  if (k == 3) {
    auto metrics = triangle_metrics(ctx, B.region);
    if (metrics.slack > m.tol_len())
      return {finalize_triangle(ctx, B, depth == 0 ? "triangulate" : "bigon-split", params)};
    // Degenerate triangle: one vertex is flat; merge its edges into a bigon.
    int flat = -1;
    for (int i = 0; i < 3 && flat < 0; i++)
      if (locally_geodesic_at(m, B.region, i)) flat = i;
    if (flat < 0)
      throw BigonSplitDiverged("degenerate triangle without a flat vertex");
    std::vector<GeodesicPath> edges;
    int prev = (flat + 2) % 3;
    auto cat = B.region.edges[prev].curve.concatenated(m, B.region.edges[flat].curve,
                                                       16 * m.snap_eps());
    for (int i = 0; i < 3; i++) {
      if (i == flat) continue;
      if (i == prev) edges.push_back({cat, certify_path(m, cat)});
      else edges.push_back(B.region.edges[i]);
    }
    CertifiedPolygon merged;
    merged.region = make_polygon(m, edges);
    merged.ambient = B.ambient;
    merged.cert = B.cert;
    return split_bigon_nondegenerate(ctx, merged, params, depth + 1);
  }
  if (k != 2) throw Error("split_bigon_nondegenerate: expected a bigon or triangle");

  auto data = bigon_data(m, B.region);

  // Vertex perturbation trick when the boundary is locally geodesic at a
  // vertex: the set B is re-represented as one non-degenerate triangle.
  for (int vtx = 0; vtx < 2; vtx++) {
    if (!locally_geodesic_at(m, B.region, vtx)) continue;
    // Normalize so the flat vertex is b.
    BigonData d = data;
    if (vtx == 1) {
      d.b = data.t;
      d.t = data.b;
      d.L = {data.R.curve.reversed(), data.R.cert};
      d.R = {data.L.curve.reversed(), data.L.cert};
    }
    auto& g = ctx.graph(16);
    for (double delta = d.a / 10; delta > d.a / 160; delta /= 2) {
      SurfacePoint bl = d.L.curve.at_arclength(m, delta);
      SurfacePoint br = d.R.curve.at_arclength(m, delta);
      double dd = shortest_path(m, g, bl, br).length();
      if (std::abs(dd - 2 * delta) > std::max(m.tol_len(), 64 * m.snap_eps()) * 4) continue;
      // Edges of the new triangle: L|[delta,a] (bl->t), reversed R|[delta,a]
      // (t->br), and the V-path br->b->bl along the old sides.
      SurfaceCurve e1 = d.L.curve.sub_arclength(m, delta, d.L.curve.length());
      SurfaceCurve e2 = d.R.curve.sub_arclength(m, delta, d.R.curve.length()).reversed();
      SurfaceCurve e3 = d.R.curve.sub_arclength(m, 0, delta)
                            .reversed()
                            .concatenated(m, d.L.curve.sub_arclength(m, 0, delta),
                                          16 * m.snap_eps());
      std::vector<GeodesicPath> edges{{e1, certify_path(m, e1)},
                                      {e2, certify_path(m, e2)},
                                      {e3, certify_path(m, e3)}};
      if (!edges[2].cert.valid(m.tolerances().tol_angle * 8)) continue;
      CertifiedPolygon T;
      T.region = make_polygon(m, edges);
      T.ambient = B.ambient;
      T.cert = B.cert;  // same set, same certificate quantities
      auto metrics = triangle_metrics(ctx, T.region);
      if (metrics.slack <= m.tol_len()) continue;
      return {finalize_triangle(ctx, T, "bigon-perturbation", params)};
    }
  }

  // Horizontal split: bottommost geodesic between the side midpoints.
  double s = data.a / 2;
  auto& g = ctx.graph(16);
  for (int attempt = 0; attempt < 5; attempt++) {
    SurfacePoint ls = data.L.curve.at_arclength(m, s);
    SurfacePoint rs = data.R.curve.at_arclength(m, s);
    double dist_lr = shortest_path(m, g, ls, rs).length();
    std::vector<GeodesicPath> candidates;
    try {
      candidates = all_geodesics_between(m, ls, rs, dist_lr + 8 * m.snap_eps());
    } catch (const EnumerationCapExceeded&) {
      s *= 0.8;
      continue;
    }
    if (candidates.empty()) {
      s *= 0.8;
      continue;
    }
    // Keep candidates free of superfluous contacts with the sides, then pick
    // the bottommost by enclosed area toward b.
    std::vector<GeodesicPath> cleaned;
    for (auto& c : candidates) {
      try {
        cleaned.push_back(remove_superfluous_from(m, c, {data.L, data.R}));
      } catch (const Error&) {
        continue;
      }
    }
    if (cleaned.empty()) {
      s *= 0.8;
      continue;
    }
    GeodesicPath gamma;
    try {
      gamma = extremal_geodesic(ctx, cleaned, B.region, data.b);
    } catch (const Error&) {
      gamma = cleaned[0];
    }
    // Transverse part: trim the portions running along L and R.
    double g0 = 0, g1 = gamma.curve.length();
    auto cl = curve_contacts(m, gamma.curve, data.L.curve);
    auto cr = curve_contacts(m, gamma.curve, data.R.curve);
    for (const auto& ev : cl.events)
      if (ev.a0 <= 8 * m.snap_eps()) g0 = std::max(g0, ev.a1);
    for (const auto& ev : cr.events)
      if (ev.a1 >= gamma.curve.length() - 8 * m.snap_eps()) g1 = std::min(g1, ev.a0);
    if (g1 - g0 <= 16 * m.snap_eps()) {
      s *= 0.8;
      continue;
    }
    SurfaceCurve hat = gamma.curve.sub_arclength(m, g0, g1);
    GeodesicPath hat_path{hat, certify_path(m, hat)};
    std::vector<CertifiedPolygon> parts;
    try {
      parts = split_by_geodesic(ctx, B, hat_path);
    } catch (const Error&) {
      s *= 0.8;
      continue;
    }
    if (parts.size() < 2) {
      s *= 0.8;
      continue;
    }
    std::vector<TriangleElement> out;
    for (auto& part : parts) {
      auto sub = split_bigon_nondegenerate(ctx, part, params, depth + 1);
      for (auto& t : sub) out.push_back(std::move(t));
    }
    return out;
  }
  throw BigonSplitDiverged("no usable horizontal split found");
}

TriangulationOutput triangulate_surface(const IntrinsicMesh& m, const PipelineParams& params,
                                        const SnapshotSink& snapshots) {
  if (!(params.epsilon > 0)) throw Error("triangulate_surface: epsilon must be positive");
  MeshContext ctx(m);
  TriangulationOutput out;
  out.epsilon = params.epsilon;
  out.epsilon_effective = std::min(params.epsilon, ctx.diameter().lower / 3 * 0.98);

  auto timed = [&](const char* name, auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    auto result = fn();
    auto stop = std::chrono::steady_clock::now();
    StageStats st;
    st.name = name;
    st.output_count = static_cast<int>(result.size());
    for (const auto& q : result) st.output_area += q.region.area;
    st.millis = std::chrono::duration<double, std::milli>(stop - start).count();
    out.stats.push_back(st);
    if (snapshots) snapshots(name, result);
    return result;
  };

  auto cover = timed("cover", [&] { return cover_absolutely_convex(ctx, params); });
  auto refined = timed("refine", [&] { return refine_cover_to_finite_graph(ctx, std::move(cover)); });
  auto disjoint =
      timed("non-overlap", [&] { return make_non_overlapping(ctx, std::move(refined)); });
  auto tris = timed("triangulate", [&] {
    std::vector<CertifiedPolygon> acc;
    for (const auto& P : disjoint) {
      auto parts = triangulate_polygon(ctx, P);
      for (auto& p : parts) acc.push_back(std::move(p));
    }
    return acc;
  });

  {
    auto start = std::chrono::steady_clock::now();
    for (auto& T : tris) {
      auto finals = split_bigon_nondegenerate(ctx, T, params, 0);
      for (auto& f : finals) out.triangles.push_back(std::move(f));
    }
    auto stop = std::chrono::steady_clock::now();
    StageStats st;
    st.name = "bigon-repair";
    st.output_count = static_cast<int>(out.triangles.size());
    for (const auto& t : out.triangles) st.output_area += t.region.area;
    st.millis = std::chrono::duration<double, std::milli>(stop - start).count();
    out.stats.push_back(st);
  }
  return out;
}

} // namespace geotri
