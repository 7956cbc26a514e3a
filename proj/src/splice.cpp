#include "geotri/splice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

namespace {

struct SegGeom {
  int face;
  Vec2 a, b;
  double s0, s1;  // arclength interval on the curve
  bool on_edge = false;
  int edge = -1;
  double ta = 0, tb = 0;  // canonical edge params when on_edge
};

std::vector<SegGeom> segment_geometry(const IntrinsicMesh& m, const SurfaceCurve& c) {
  std::vector<SegGeom> out;
  double eps = m.snap_eps();
  double acc = 0;
  for (int i = 0; i < c.segment_count(); i++) {
    SegGeom g;
    g.face = c.segment_face(i);
    g.a = pos_in_face(m, c.point(i), g.face);
    g.b = pos_in_face(m, c.point(i + 1), g.face);
    g.s0 = acc;
    acc += c.segment_length(i);
    g.s1 = acc;
    const auto& L = m.layout(g.face);
    for (int j = 0; j < 3; j++) {
      Vec2 A = L[j], B = L[(j + 1) % 3];
      if (point_segment_dist(A, B, g.a) <= eps && point_segment_dist(A, B, g.b) <= eps) {
        int h = 3 * g.face + j;
        g.on_edge = true;
        g.edge = m.edge_of_he(h);
        bool canon = m.edge_halfedge(g.edge) == h;
        double ua = closest_param(A, B, g.a), ub = closest_param(A, B, g.b);
        g.ta = canon ? ua : 1 - ua;
        g.tb = canon ? ub : 1 - ub;
        break;
      }
    }
    if (g.s1 > g.s0) out.push_back(g);
  }
  return out;
}

} // namespace

double CurveContacts::first_a() const {
  double best = 1e300;
  for (const auto& e : events) best = std::min(best, e.a0);
  return best;
}

double CurveContacts::last_a() const {
  double best = -1e300;
  for (const auto& e : events) best = std::max(best, e.a1);
  return best;
}

CurveContacts curve_contacts(const IntrinsicMesh& m, const SurfaceCurve& a, const SurfaceCurve& b) {
  double eps = m.snap_eps();
  CurveContacts out;
  auto ga = segment_geometry(m, a);
  auto gb = segment_geometry(m, b);
  for (const auto& sa : ga) {
    for (const auto& sb : gb) {
      // Resolve both segments into one shared chart when possible.
      if (sa.on_edge && sb.on_edge && sa.edge == sb.edge) {
        double lo_a = std::min(sa.ta, sa.tb), hi_a = std::max(sa.ta, sa.tb);
        double lo_b = std::min(sb.ta, sb.tb), hi_b = std::max(sb.ta, sb.tb);
        double len_e = m.edge_length(sa.edge);
        double lo = std::max(lo_a, lo_b), hi = std::min(hi_a, hi_b);
        if (hi < lo - eps / len_e) continue;
        lo = std::min(std::max(lo, 0.0), 1.0);
        hi = std::min(std::max(hi, 0.0), 1.0);
        CurveContacts::Event ev;
        auto a_param = [&](double t) {
          double u = (sa.tb != sa.ta) ? (t - sa.ta) / (sa.tb - sa.ta) : 0.0;
          return sa.s0 + std::min(1.0, std::max(0.0, u)) * (sa.s1 - sa.s0);
        };
        auto b_param = [&](double t) {
          double u = (sb.tb != sb.ta) ? (t - sb.ta) / (sb.tb - sb.ta) : 0.0;
          return sb.s0 + std::min(1.0, std::max(0.0, u)) * (sb.s1 - sb.s0);
        };
        double aa0 = a_param(lo), aa1 = a_param(hi);
        double bb0 = b_param(lo), bb1 = b_param(hi);
        ev.a0 = std::min(aa0, aa1);
        ev.a1 = std::max(aa0, aa1);
        ev.b0 = std::min(bb0, bb1);
        ev.b1 = std::max(bb0, bb1);
        ev.is_arc = (hi - lo) * len_e > eps;
        out.events.push_back(ev);
        continue;
      }
      int f = -1;
      Vec2 pa = sa.a, pb1 = sa.b, qa, qb;
      if (sa.face == sb.face) {
        f = sa.face;
        qa = sb.a;
        qb = sb.b;
      } else if (sb.on_edge) {
        // b's segment lies on an edge of a's face?
        int h = m.edge_halfedge(sb.edge);
        int f1 = IntrinsicMesh::he_face(h);
        int f2 = m.twin(h) >= 0 ? IntrinsicMesh::he_face(m.twin(h)) : -1;
        if (f1 == sa.face || f2 == sa.face) {
          f = sa.face;
          qa = pos_in_face(m, SurfacePoint::edge(sb.edge, sb.ta), f);
          qb = pos_in_face(m, SurfacePoint::edge(sb.edge, std::max(1e-12, std::min(1 - 1e-12, sb.tb))), f);
        }
      } else if (sa.on_edge) {
        int h = m.edge_halfedge(sa.edge);
        int f1 = IntrinsicMesh::he_face(h);
        int f2 = m.twin(h) >= 0 ? IntrinsicMesh::he_face(m.twin(h)) : -1;
        if (f1 == sb.face || f2 == sb.face) {
          f = sb.face;
          pa = pos_in_face(m, SurfacePoint::edge(sa.edge, sa.ta), f);
          pb1 = pos_in_face(m, SurfacePoint::edge(sa.edge, std::max(1e-12, std::min(1 - 1e-12, sa.tb))), f);
          qa = sb.a;
          qb = sb.b;
        }
      }
      if (f < 0) continue;
      auto is = segment_intersection(pa, pb1, qa, qb, eps);
      if (is.kind == SegIsect::None) continue;
      CurveContacts::Event ev;
      if (is.kind == SegIsect::Point) {
        ev.a0 = ev.a1 = sa.s0 + is.t * (sa.s1 - sa.s0);
        ev.b0 = ev.b1 = sb.s0 + is.u * (sb.s1 - sb.s0);
        ev.is_arc = false;
      } else {
        double aa0 = sa.s0 + is.t * (sa.s1 - sa.s0), aa1 = sa.s0 + is.t1 * (sa.s1 - sa.s0);
        double bb0 = sb.s0 + is.u * (sb.s1 - sb.s0), bb1 = sb.s0 + is.u1 * (sb.s1 - sb.s0);
        ev.a0 = std::min(aa0, aa1);
        ev.a1 = std::max(aa0, aa1);
        ev.b0 = std::min(bb0, bb1);
        ev.b1 = std::max(bb0, bb1);
        ev.is_arc = ev.a1 - ev.a0 > eps;
      }
      out.events.push_back(ev);
    }
  }
  // Merge events into contact components by their locus on b.
  std::vector<int> parent(out.events.size());
  for (size_t i = 0; i < parent.size(); i++) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  double merge_eps = 8 * eps;
  for (size_t i = 0; i < out.events.size(); i++)
    for (size_t j = i + 1; j < out.events.size(); j++) {
      const auto &E = out.events[i], &F = out.events[j];
      bool touch_b = !(E.b1 < F.b0 - merge_eps || F.b1 < E.b0 - merge_eps);
      bool touch_a = !(E.a1 < F.a0 - merge_eps || F.a1 < E.a0 - merge_eps);
      if (touch_b || touch_a) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  std::set<int> roots;
  for (size_t i = 0; i < out.events.size(); i++) roots.insert(find(static_cast<int>(i)));
  out.components = static_cast<int>(roots.size());
  return out;
}

SurfaceCurve splice_between(const IntrinsicMesh& m, const SurfaceCurve& a, double s0, double s1,
                            const SurfaceCurve& b, double t0, double t1) {
  double snap = 16 * m.snap_eps();
  SurfaceCurve mid = b.sub_arclength(m, std::min(t0, t1), std::max(t0, t1));
  if (t0 > t1) mid = mid.reversed();
  SurfaceCurve head = a.sub_arclength(m, 0, s0);
  SurfaceCurve tail = a.sub_arclength(m, s1, a.length());
  return head.concatenated(m, mid, snap).concatenated(m, tail, snap);
}

GeodesicPath remove_superfluous_from(const IntrinsicMesh& m, GeodesicPath path,
                                     const std::vector<GeodesicPath>& edges) {
  double slack = std::max(m.tol_len(), 64 * m.snap_eps());
  for (size_t i = 0; i < edges.size(); i++) {
    auto contacts = curve_contacts(m, path.curve, edges[i].curve);
    if (contacts.components <= 1) continue;
    // First and last contact along the path; replace by the matching edge arc.
    double s0 = contacts.first_a(), s1 = contacts.last_a();
    double t0 = 0, t1 = 0;
    for (const auto& ev : contacts.events) {
      if (ev.a0 <= s0 + 1e-12) t0 = (std::abs(ev.a0 - s0) < std::abs(ev.a1 - s0)) ? ev.b0 : ev.b1;
      if (ev.a1 >= s1 - 1e-12) t1 = (std::abs(ev.a1 - s1) < std::abs(ev.a0 - s1)) ? ev.b1 : ev.b0;
    }
    // Match orientation: the point of b at t0 must equal the point of a at s0.
    auto pa0 = path.curve.at_arclength(m, s0);
    auto pb0 = edges[i].curve.at_arclength(m, t0);
    if (!same_point(m, pa0, pb0, 64 * m.snap_eps())) std::swap(t0, t1);
    double before = path.curve.length();
    SurfaceCurve spliced = splice_between(m, path.curve, s0, s1, edges[i].curve, t0, t1);
    if (spliced.length() > before + slack)
      throw Error("remove_superfluous_from: splice increased length");
    auto straightened = straighten_path(m, spliced.simplified(m, m.snap_eps()));
    if (straightened.length() > before + slack)
      throw Error("remove_superfluous_from: result longer than input");
    path = straightened;
  }
  return path;
}

GeodesicPath geodesic_without_superfluous(const IntrinsicMesh& m, const SteinerGraph& graph,
                                          const std::vector<GeodesicPath>& edges,
                                          const SurfacePoint& p, const SurfacePoint& q) {
  auto path = shortest_path(m, graph, p, q);
  return remove_superfluous_from(m, path, edges);
}

std::vector<int> intersection_component_counts(const IntrinsicMesh& m, const GeodesicPath& g,
                                               const std::vector<GeodesicPath>& system) {
  std::vector<int> out;
  for (const auto& e : system) out.push_back(curve_contacts(m, g.curve, e.curve).components);
  return out;
}

SuperfluousPairResult remove_superfluous_pair(const IntrinsicMesh& m, const SteinerGraph& graph,
                                              const PolygonRegion& P, const SurfacePoint& p0,
                                              const SurfacePoint& p1, const SurfacePoint& p2) {
  if (P.edges.size() == 2) {
    double eps = 16 * m.snap_eps();
    for (const auto& p : {p0, p1, p2})
      for (const auto& v : P.vertices)
        if (same_point(m, p, v, eps))
          throw BigonVertexCase("designated point is a bigon vertex");
  }
  SuperfluousPairResult out;
  out.gamma1 = geodesic_without_superfluous(m, graph, P.edges, p0, p1);

  // Second geodesic: first free of superfluous intersections with the edges,
  // then spliced along gamma1 so their mutual intersection is connected.
  auto eta_t = geodesic_without_superfluous(m, graph, P.edges, p0, p2);
  auto contacts = curve_contacts(m, eta_t.curve, out.gamma1.curve);
  double slack = std::max(m.tol_len(), 64 * m.snap_eps());
  if (!contacts.empty() && contacts.components > 1) {
    // q = last contact along eta_t; replace the initial portion by gamma1's.
    double s_q = contacts.last_a();
    double t_q = 0;
    for (const auto& ev : contacts.events)
      if (ev.a1 >= s_q - 1e-12) t_q = ev.b1;
    auto eta = splice_between(m, eta_t.curve, 0, s_q, out.gamma1.curve, 0, t_q);
    if (eta.length() > eta_t.length() + slack)
      throw Error("remove_superfluous_pair: prefix splice increased length");
    auto eta_s = straighten_path(m, eta.simplified(m, m.snap_eps()));
    eta_s = remove_superfluous_from(m, eta_s, P.edges);
    // Re-splice against gamma1 once more if needed (proof's s/t exchange).
    auto c2 = curve_contacts(m, eta_s.curve, out.gamma1.curve);
    if (c2.components > 1) {
      double s0 = c2.first_a(), s1 = c2.last_a();
      double t0 = 0, t1 = 0;
      for (const auto& ev : c2.events) {
        if (ev.a0 <= s0 + 1e-12) t0 = ev.b0;
        if (ev.a1 >= s1 - 1e-12) t1 = ev.b1;
      }
      auto pa0 = eta_s.curve.at_arclength(m, s0);
      auto pb0 = out.gamma1.curve.at_arclength(m, t0);
      if (!same_point(m, pa0, pb0, 64 * m.snap_eps())) std::swap(t0, t1);
      auto respliced = splice_between(m, eta_s.curve, s0, s1, out.gamma1.curve, t0, t1);
      eta_s = straighten_path(m, respliced.simplified(m, m.snap_eps()));
      eta_s = remove_superfluous_from(m, eta_s, P.edges);
    }
    out.gamma2 = eta_s;
  } else {
    out.gamma2 = eta_t;
  }
  return out;
}

GeodesicPath normalize_to_finite_graph(const IntrinsicMesh& m,
                                       const std::vector<GeodesicPath>& system,
                                       const GeodesicPath& gamma_star) {
  GeodesicPath g = gamma_star;
  double slack = std::max(m.tol_len(), 64 * m.snap_eps());
  const int keep_threshold = 6;
  for (const auto& eta : system) {
    auto contacts = curve_contacts(m, g.curve, eta.curve);
    if (contacts.components <= keep_threshold) continue;
    // Splice between the first and last contact that also lie on gamma_star.
    auto on_star = curve_contacts(m, g.curve, gamma_star.curve);
    auto lies_on_star = [&](double s) {
      for (const auto& ev : on_star.events)
        if (s >= ev.a0 - 1e-9 && s <= ev.a1 + 1e-9) return true;
      return false;
    };
    double s0 = 1e300, s1 = -1e300, t0 = 0, t1 = 0;
    for (const auto& ev : contacts.events) {
      if (lies_on_star(ev.a0) && ev.a0 < s0) { s0 = ev.a0; t0 = ev.b0; }
      if (lies_on_star(ev.a1) && ev.a1 > s1) { s1 = ev.a1; t1 = ev.b1; }
    }
    if (s1 <= s0) continue;
    auto pa0 = g.curve.at_arclength(m, s0);
    auto pb0 = eta.curve.at_arclength(m, t0);
    if (!same_point(m, pa0, pb0, 64 * m.snap_eps())) std::swap(t0, t1);
    double before = g.curve.length();
    auto spliced = splice_between(m, g.curve, s0, s1, eta.curve, t0, t1);
    if (spliced.length() > before + slack)
      throw Error("normalize_to_finite_graph: splice increased length");
    g = straighten_path(m, spliced.simplified(m, m.snap_eps()));
  }
  return g;
}

} // namespace geotri
