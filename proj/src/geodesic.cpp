#include "geotri/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

namespace {

double norm_pos(double ang) {
  while (ang < 0) ang += 2 * M_PI;
  while (ang >= 2 * M_PI) ang -= 2 * M_PI;
  return ang;
}

// Corner slot (halfedge id) of vertex point p in face f, mirroring the
// resolution used by bary_in_face.
int corner_slot_in_face(const IntrinsicMesh& m, const SurfacePoint& p, int f) {
  if (p.rep >= 0 && IntrinsicMesh::he_face(p.rep) == f && m.he_tail(p.rep) == p.id) return p.rep;
  if (p.rep2 >= 0 && IntrinsicMesh::he_face(p.rep2) == f && m.he_tail(p.rep2) == p.id)
    return p.rep2;
  for (int i = 0; i < 3; i++)
    if (m.corner_vertex(f, i) == p.id) return 3 * f + i;
  throw Error("corner_slot_in_face: vertex not on face");
}

struct Station {
  enum K { End, Cross, Pivot } k = End;
  SurfacePoint pt;
  int cross_he = -1;             // Cross: path runs face(h) -> face(twin(h))
  int in_slot = -1, out_slot = -1;  // Pivot: corner slots in the in/out faces
  int face_hint = -1;            // End: host face of the adjacent segment
};

Vec2 slot_pos(const IntrinsicMesh& m, int slot) {
  return m.layout(IntrinsicMesh::he_face(slot))[IntrinsicMesh::he_side(slot)];
}

// Position of a station in the given face chart. For pivots, side < 0 uses
// in_slot, side > 0 uses out_slot.
Vec2 station_pos(const IntrinsicMesh& m, const Station& st, int face, int side) {
  if (st.k == Station::Pivot) {
    int slot = side > 0 ? st.out_slot : st.in_slot;
    if (IntrinsicMesh::he_face(slot) != face) throw Error("station_pos: pivot slot face mismatch");
    return slot_pos(m, slot);
  }
  return pos_in_face(m, st.pt, face);
}

// Sweep around vertex v from the incoming arm to the outgoing arm on one
// side. arm_in is a direction at corner in_slot (in that face's chart),
// arm_out at out_slot. Returns accumulated angle and whether the sweep hit
// the mesh boundary before reaching the outgoing arm.
std::pair<double, bool> sweep_angle(const IntrinsicMesh& m, int in_slot, Vec2 arm_in, int out_slot,
                                    Vec2 arm_out, bool cw) {
  double acc = 0;
  int c = in_slot;
  Vec2 dir_cur = arm_in;
  double limit = m.vertex_angle(m.he_tail(in_slot)) * 2 + 4 * M_PI;
  while (true) {
    int f = IntrinsicMesh::he_face(c), i = IntrinsicMesh::he_side(c);
    const auto& L = m.layout(f);
    Vec2 spoke_exit =
        cw ? (L[(i + 1) % 3] - L[i]) : (L[(i + 2) % 3] - L[i]);
    double to_exit = cw ? norm_pos(dir_cur.angle() - spoke_exit.angle())
                        : norm_pos(spoke_exit.angle() - dir_cur.angle());
    if (c == out_slot) {
      double to_arm = cw ? norm_pos(dir_cur.angle() - arm_out.angle())
                         : norm_pos(arm_out.angle() - dir_cur.angle());
      if (to_arm <= to_exit + 1e-12) return {acc + to_arm, false};
    }
    acc += to_exit;
    if (acc > limit) throw Error("sweep_angle: outgoing arm not found around vertex");
    int he_exit = cw ? c : 3 * f + (i + 2) % 3;
    int tw = m.twin(he_exit);
    if (tw < 0) return {acc, true};
    int jg = IntrinsicMesh::he_side(tw), g = IntrinsicMesh::he_face(tw);
    const auto& Lg = m.layout(g);
    if (cw) {
      c = IntrinsicMesh::he_next(tw);
      dir_cur = Lg[jg] - Lg[(jg + 1) % 3];
    } else {
      c = tw;
      dir_cur = Lg[(jg + 1) % 3] - Lg[jg];
    }
  }
}

struct ParsedPath {
  std::vector<Station> stations;
};

ParsedPath parse_curve(const IntrinsicMesh& m, const SurfaceCurve& c) {
  ParsedPath out;
  if (c.points().empty()) throw Error("straighten: empty curve");
  Station first;
  first.k = Station::End;
  first.pt = c.front();
  if (c.segment_count() > 0) first.face_hint = c.segment_face(0);
  out.stations.push_back(first);
  int nseg = c.segment_count();
  for (int i = 1; i < nseg; i++) {
    const SurfacePoint& p = c.point(i);
    int f_prev = c.segment_face(i - 1), f_next = c.segment_face(i);
    if (p.kind == SurfacePoint::Kind::Vertex) {
      Station st;
      st.k = Station::Pivot;
      st.pt = p;
      st.in_slot = corner_slot_in_face(m, p, f_prev);
      st.out_slot = corner_slot_in_face(m, p, f_next);
      out.stations.push_back(st);
      continue;
    }
    if (f_prev == f_next) continue;  // interior bend; the funnel handles it
    if (p.kind != SurfacePoint::Kind::Edge)
      throw Error("straighten: face change without an edge point");
    int h = m.edge_halfedge(p.id);
    int cross = -1;
    if (IntrinsicMesh::he_face(h) == f_prev && m.twin(h) >= 0 &&
        IntrinsicMesh::he_face(m.twin(h)) == f_next)
      cross = h;
    else if (m.twin(h) >= 0 && IntrinsicMesh::he_face(m.twin(h)) == f_prev &&
             IntrinsicMesh::he_face(h) == f_next)
      cross = m.twin(h);
    if (cross < 0) throw Error("straighten: inconsistent crossing");
    Station st;
    st.k = Station::Cross;
    st.pt = p;
    st.cross_he = cross;
    out.stations.push_back(st);
  }
  Station last;
  last.k = Station::End;
  last.pt = c.back();
  if (c.segment_count() > 0) last.face_hint = c.segment_face(c.segment_count() - 1);
  out.stations.push_back(last);
  return out;
}

// Face on the outgoing side of a station (for the run that starts there).
int out_face(const IntrinsicMesh& m, const Station& st, const Station* next,
             const SurfaceCurve* src, int) {
  (void)src;
  if (st.k == Station::Pivot) return IntrinsicMesh::he_face(st.out_slot);
  if (st.k == Station::Cross) return IntrinsicMesh::he_face(m.twin(st.cross_he));
  // Endpoint: shared face with the next station's entry.
  if (!next) throw Error("out_face: dangling endpoint");
  if (next->k == Station::Cross) {
    int f = IntrinsicMesh::he_face(next->cross_he);
    if (!point_on_face(m, st.pt, f)) throw Error("out_face: endpoint not on entry face");
    return f;
  }
  if (next->k == Station::Pivot) {
    int f = IntrinsicMesh::he_face(next->in_slot);
    if (!point_on_face(m, st.pt, f)) throw Error("out_face: endpoint not on pivot face");
    return f;
  }
  if (st.face_hint >= 0 && point_on_face(m, st.pt, st.face_hint) &&
      point_on_face(m, next->pt, st.face_hint))
    return st.face_hint;
  if (next->face_hint >= 0 && point_on_face(m, st.pt, next->face_hint) &&
      point_on_face(m, next->pt, next->face_hint))
    return next->face_hint;
  int f = shared_face(m, st.pt, next->pt);
  if (f < 0) throw Error("out_face: endpoints share no face");
  return f;
}

struct RunGeometry {
  StripLayout strip;
  Vec2 s, t;
  std::vector<std::pair<Vec2, Vec2>> portals;  // (left=head, right=tail)
};

RunGeometry run_geometry(const IntrinsicMesh& m, const std::vector<Station>& sts, int i0, int i1) {
  RunGeometry rg;
  std::vector<int> crossings;
  for (int i = i0 + 1; i < i1; i++) crossings.push_back(sts[i].cross_he);
  int f0 = out_face(m, sts[i0], i0 + 1 <= i1 ? &sts[i0 + 1] : nullptr, nullptr, 0);
  rg.strip = unfold_strip(m, f0, crossings);
  rg.s = station_pos(m, sts[i0], f0, +1);
  int f_last = rg.strip.faces.back();
  Vec2 t_local = station_pos(m, sts[i1], f_last, -1);
  rg.t = rg.strip.charts.back().apply(t_local);
  for (size_t i = 0; i < crossings.size(); i++) {
    auto [tail, head] = rg.strip.portal(m, static_cast<int>(i));
    rg.portals.push_back({head, tail});
  }
  return rg;
}

// Rebuild the stations of a run from a funnel path through its strip.
std::vector<Station> stations_from_funnel(const IntrinsicMesh& m, const StripLayout& strip,
                                          const FunnelPath& fp, double eps) {
  std::vector<Station> out;
  int nportals = static_cast<int>(strip.crossings.size());
  int i = 1;  // skip source node
  while (i <= nportals) {
    const FunnelNode& node = fp.nodes[i];
    int h = strip.crossings[i - 1];
    double u = node.t;
    // Group consecutive portal nodes at the same position into one pivot.
    double len = m.he_length(h);
    bool at_tail = u * len <= eps, at_head = (1 - u) * len <= eps;
    if (at_tail || at_head) {
      int v = at_tail ? m.he_tail(h) : m.he_head(h);
      int in_slot = at_tail ? h : IntrinsicMesh::he_next(h);
      int j = i;
      while (j + 1 <= nportals) {
        const FunnelNode& nn = fp.nodes[j + 1];
        if (dist(nn.pos, node.pos) > 4 * eps) break;
        j++;
      }
      int h_last = strip.crossings[j - 1];
      bool last_at_tail = m.he_tail(h_last) == v;
      bool last_at_head = m.he_head(h_last) == v;
      int out_slot;
      if (last_at_tail && !last_at_head)
        out_slot = IntrinsicMesh::he_next(m.twin(h_last));
      else if (last_at_head && !last_at_tail)
        out_slot = m.twin(h_last);
      else {
        // Ambiguous (degenerate edge); decide by position.
        double u_last = fp.nodes[j].t;
        out_slot = u_last <= 0.5 ? IntrinsicMesh::he_next(m.twin(h_last)) : m.twin(h_last);
      }
      Station st;
      st.k = Station::Pivot;
      st.pt = SurfacePoint::vertex(v, in_slot);
      st.in_slot = in_slot;
      st.out_slot = out_slot;
      out.push_back(st);
      i = j + 1;
      continue;
    }
    Station st;
    st.k = Station::Cross;
    int e = m.edge_of_he(h);
    st.pt = SurfacePoint::edge(e, m.edge_halfedge(e) == h ? u : 1 - u);
    st.cross_he = h;
    out.push_back(st);
    i++;
  }
  return out;
}

SurfaceCurve stations_to_curve(const IntrinsicMesh& m, const std::vector<Station>& sts) {
  std::vector<SurfacePoint> pts;
  std::vector<int> hints;
  for (size_t i = 0; i < sts.size(); i++) {
    pts.push_back(sts[i].pt);
    if (i + 1 < sts.size()) {
      // Host face between station i and i+1 = out face of station i.
      hints.push_back(out_face(m, sts[i], &sts[i + 1], nullptr, 0));
    }
  }
  return SurfaceCurve(m, std::move(pts), hints);
}

double stations_length(const IntrinsicMesh& m, const std::vector<Station>& sts) {
  double total = 0;
  for (size_t i = 0; i + 1 < sts.size(); i++) {
    int f = out_face(m, sts[i], &sts[i + 1], nullptr, 0);
    total += dist(station_pos(m, sts[i], f, +1), station_pos(m, sts[i + 1], f, -1));
  }
  return total;
}

} // namespace

GeodesicCertificate certify_path(const IntrinsicMesh& m, const SurfaceCurve& c) {
  GeodesicCertificate cert;
  auto parsed = parse_curve(m, c);
  auto& sts = parsed.stations;
  std::vector<int> anchors;
  for (int i = 0; i < static_cast<int>(sts.size()); i++)
    if (sts[i].k != Station::Cross) anchors.push_back(i);
  for (size_t a = 0; a + 1 < anchors.size(); a++) {
    int i0 = anchors[a], i1 = anchors[a + 1];
    if (i1 - i0 < 2 && sts[i0].k == Station::End && sts[i1].k == Station::End && i1 == i0 + 1) {
      // single straight segment, nothing to certify
    }
    auto rg = run_geometry(m, sts, i0, i1);
    // Crossing residuals: turn angles along the unfolded polyline.
    std::vector<Vec2> pl{rg.s};
    for (int i = i0 + 1; i < i1; i++) {
      int idx = i - i0 - 1;
      int h = sts[i].cross_he;
      auto [tail, head] = rg.strip.portal(m, idx);
      int e = m.edge_of_he(h);
      double u = (m.edge_halfedge(e) == h) ? sts[i].pt.t : 1 - sts[i].pt.t;
      pl.push_back(tail + (head - tail) * u);
    }
    pl.push_back(rg.t);
    for (size_t i = 1; i + 1 < pl.size(); i++) {
      Vec2 u = pl[i] - pl[i - 1], v = pl[i + 1] - pl[i];
      if (u.norm() < 1e-300 || v.norm() < 1e-300) continue;
      double turn = std::abs(norm_pos(u.angle() - v.angle()));
      turn = std::min(turn, 2 * M_PI - turn);
      cert.max_crossing_residual = std::max(cert.max_crossing_residual, turn);
    }
  }
  // Pivot angles.
  for (size_t a = 1; a + 1 < anchors.size(); a++) {
    int i = anchors[a];
    if (sts[i].k != Station::Pivot) continue;
    int prev = anchors[a - 1], next = anchors[a + 1];
    // Incoming arm: direction from pivot to the previous crossing/anchor,
    // in the in-face chart; outgoing likewise.
    int f_in = IntrinsicMesh::he_face(sts[i].in_slot);
    int f_out = IntrinsicMesh::he_face(sts[i].out_slot);
    Vec2 pv_in = slot_pos(m, sts[i].in_slot);
    Vec2 pv_out = slot_pos(m, sts[i].out_slot);
    const Station& before = (i - 1 == prev) ? sts[prev] : sts[i - 1];
    const Station& after = (i + 1 == next) ? sts[next] : sts[i + 1];
    Vec2 arm_in = station_pos(m, before, f_in, +1) - pv_in;
    Vec2 arm_out = station_pos(m, after, f_out, -1) - pv_out;
    auto [cw, cw_blocked] = sweep_angle(m, sts[i].in_slot, arm_in, sts[i].out_slot, arm_out, true);
    auto [ccw, ccw_blocked] =
        sweep_angle(m, sts[i].in_slot, arm_in, sts[i].out_slot, arm_out, false);
    GeodesicCertificate::Pivot p;
    p.at = sts[i].pt;
    p.cw_angle = cw;
    p.cw_blocked = cw_blocked;
    p.ccw_angle = ccw;
    p.ccw_blocked = ccw_blocked;
    cert.pivots.push_back(p);
  }
  return cert;
}

GeodesicPath straighten_path(const IntrinsicMesh& m, const SurfaceCurve& c, int max_iter) {
  double eps = m.snap_eps();
  double tol_angle = m.tolerances().tol_angle;
  auto parsed = parse_curve(m, c);
  std::vector<Station> sts = std::move(parsed.stations);

  auto anchor_indices = [&]() {
    std::vector<int> anchors;
    for (int i = 0; i < static_cast<int>(sts.size()); i++)
      if (sts[i].k != Station::Cross) anchors.push_back(i);
    return anchors;
  };

  int iter = 0;
  while (true) {
    if (++iter > max_iter) throw StraighteningDiverged("straighten_path exceeded iteration cap");
    bool changed = false;

    // Remove immediate backtracks (cross h followed by cross twin(h) nearby).
    for (size_t i = 0; i + 1 < sts.size(); i++) {
      if (sts[i].k == Station::Cross && sts[i + 1].k == Station::Cross &&
          sts[i + 1].cross_he == m.twin(sts[i].cross_he) &&
          same_point(m, sts[i].pt, sts[i + 1].pt, 4 * eps)) {
        sts.erase(sts.begin() + i, sts.begin() + i + 2);
        changed = true;
        break;
      }
    }

    // Funnel every run between anchors.
    auto anchors = anchor_indices();
    std::vector<Station> rebuilt;
    rebuilt.push_back(sts[anchors[0]]);
    for (size_t a = 0; a + 1 < anchors.size(); a++) {
      int i0 = anchors[a], i1 = anchors[a + 1];
      double old_len = 0;
      {
        std::vector<Station> runsts(sts.begin() + i0, sts.begin() + i1 + 1);
        old_len = stations_length(m, runsts);
      }
      auto rg = run_geometry(m, sts, i0, i1);
      auto fp = funnel_shortest(rg.portals, rg.s, rg.t, eps);
      auto mid = stations_from_funnel(m, rg.strip, fp, eps * 4);
      if (fp.length < old_len - 10 * eps) changed = true;
      std::vector<Station> runsts;
      runsts.push_back(sts[i0]);
      for (auto& st : mid) runsts.push_back(st);
      runsts.push_back(sts[i1]);
      if (runsts.size() != static_cast<size_t>(i1 - i0 + 1)) changed = true;
      for (size_t i = 1; i + 1 < runsts.size(); i++) rebuilt.push_back(runsts[i]);
      rebuilt.push_back(sts[i1]);
    }
    sts = std::move(rebuilt);

    // Pivot processing: reroute across any side whose wedge is below pi.
    anchors = anchor_indices();
    bool rerouted = false;
    for (size_t a = 1; a + 1 < anchors.size() && !rerouted; a++) {
      int i = anchors[a];
      if (sts[i].k != Station::Pivot) continue;
      int f_in = IntrinsicMesh::he_face(sts[i].in_slot);
      int f_out = IntrinsicMesh::he_face(sts[i].out_slot);
      Vec2 pv_in = slot_pos(m, sts[i].in_slot);
      Vec2 pv_out = slot_pos(m, sts[i].out_slot);
      const Station& before = sts[i - 1];
      const Station& after = sts[i + 1];
      Vec2 arm_in = station_pos(m, before, f_in, +1) - pv_in;
      Vec2 arm_out = station_pos(m, after, f_out, -1) - pv_out;
      if (arm_in.norm() <= 4 * eps || arm_out.norm() <= 4 * eps) continue;
      for (bool cw : {true, false}) {
        auto [ang, blocked] =
            sweep_angle(m, sts[i].in_slot, arm_in, sts[i].out_slot, arm_out, cw);
        if (blocked || ang >= M_PI - tol_angle / 2) continue;
        // Unfold the fan on this side and funnel across it.
        std::vector<int> fan_crossings;
        {
          int cslot = sts[i].in_slot;
          int guard = 0;
          while (true) {
            if (++guard > m.halfedge_count() + 8) throw Error("fan walk stuck");
            int f = IntrinsicMesh::he_face(cslot), ci = IntrinsicMesh::he_side(cslot);
            if (cslot == sts[i].out_slot) {
              // Check the outgoing arm lies in this wedge on the sweep side;
              // the sweep_angle above already guaranteed reachability.
              break;
            }
            int he_exit = cw ? cslot : 3 * f + (ci + 2) % 3;
            fan_crossings.push_back(he_exit);
            int tw = m.twin(he_exit);
            if (tw < 0) throw Error("fan reroute hit boundary");
            cslot = cw ? IntrinsicMesh::he_next(tw) : tw;
          }
        }
        if (fan_crossings.empty()) {
          // Same wedge: pivot is redundant; drop it.
          sts.erase(sts.begin() + i);
          rerouted = true;
          changed = true;
          break;
        }
        auto strip = unfold_strip(m, f_in, fan_crossings);
        Vec2 s = station_pos(m, before, f_in, +1);
        Vec2 t_local = station_pos(m, after, strip.faces.back(), -1);
        Vec2 t = strip.charts.back().apply(t_local);
        std::vector<std::pair<Vec2, Vec2>> portals;
        for (size_t q = 0; q < fan_crossings.size(); q++) {
          auto [tail, head] = strip.portal(m, static_cast<int>(q));
          portals.push_back({head, tail});
        }
        auto fp = funnel_shortest(portals, s, t, eps);
        auto mid = stations_from_funnel(m, strip, fp, eps * 4);
        // Keep only if it actually improves (guards numeric cycling).
        double old_len = arm_in.norm() + arm_out.norm();
        if (fp.length > old_len - eps) continue;
        std::vector<Station> ns(sts.begin(), sts.begin() + i);
        for (auto& st : mid) ns.push_back(st);
        ns.insert(ns.end(), sts.begin() + i + 1, sts.end());
        sts = std::move(ns);
        rerouted = true;
        changed = true;
        break;
      }
    }

    if (!changed) break;
  }

  GeodesicPath out;
  out.curve = stations_to_curve(m, sts);
  out.cert = certify_path(m, out.curve);
  return out;
}

GeodesicPath shortest_path(const IntrinsicMesh& m, const SteinerGraph& graph,
                           const SurfacePoint& a, const SurfacePoint& b) {
  auto init = graph.shortest(a, b);
  auto out = straighten_path(m, init.curve);
  double slack = std::max(m.tol_len(), 16 * m.snap_eps());
  if (out.length() > init.length + slack)
    throw Error("shortest_path: straightening increased length");
  return out;
}

OracleResult oracle_distance(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b,
                             int n) {
  SteinerGraph g(m, n);
  auto r = g.shortest(a, b);
  return {r.length, r.err_bound};
}

GeodesicPath shortest_homotopic(const IntrinsicMesh& m, const SurfaceCurve& c) {
  auto out = straighten_path(m, c);
  if (out.length() > c.length() + std::max(m.tol_len(), 16 * m.snap_eps()))
    throw Error("shortest_homotopic: length increased");
  return out;
}

GeodesicPath shorten_closed_curve(const IntrinsicMesh& m, const SurfaceCurve& c, int rounds) {
  if (!c.is_closed(m, m.snap_eps())) throw Error("shorten_closed_curve: curve not closed");
  SurfaceCurve cur = c;
  double tol = m.tol_len();
  GeodesicPath best;
  double prev_len = 1e300;
  for (int r = 0; r < rounds; r++) {
    auto sp = straighten_path(m, cur);
    best = sp;
    if (std::abs(prev_len - sp.length()) <= tol && r > 0) break;
    prev_len = sp.length();
    // Rotate the basepoint to the middle and re-straighten: at a fixed point
    // the whole cycle is locally geodesic including the old basepoint.
    double half = sp.curve.length() / 2;
    SurfaceCurve head = sp.curve.sub_arclength(m, 0, half);
    SurfaceCurve tail = sp.curve.sub_arclength(m, half, sp.curve.length());
    cur = tail.concatenated(m, head, m.snap_eps() * 8);
  }
  return best;
}

std::vector<GeodesicPath> all_geodesics_between(const IntrinsicMesh& m, const SurfacePoint& a,
                                                const SurfacePoint& b, double L_max,
                                                int cap_hint) {
  double eps = m.snap_eps();
  int cap = cap_hint > 0 ? cap_hint : 24;
  std::vector<GeodesicPath> found;
  auto push_candidate = [&](const SurfaceCurve& c) {
    GeodesicPath sp = straighten_path(m, c);
    if (sp.length() > L_max + m.tol_len()) return;
    for (auto& g : found) {
      if (std::abs(g.length() - sp.length()) > m.tol_len() * 8) continue;
      auto p1 = g.curve.at_arclength(m, g.length() / 2);
      auto p2 = sp.curve.at_arclength(m, sp.length() / 2);
      if (same_point(m, p1, p2, 64 * eps)) return;
    }
    found.push_back(std::move(sp));
  };

  // One start state per corner-slot representative of `a` (abstract gluings
  // can expose several), tracked in the start face's chart.
  struct State {
    int face0 = -1;        // start face (chart of the whole unfolding)
    int start_slot = -1;   // corner slot when `a` is a vertex
    Vec2 s;                // source position in face0 chart
    int face = -1;         // current face
    std::vector<int> crossings;
    Rigid2 chart;          // current face chart -> face0 chart
    std::vector<std::pair<Vec2, Vec2>> portals;  // (left=head, right=tail), face0 chart
    double lower = 0;      // lower bound on any path length through the strip
    int wind_vertex = -1;  // consecutive crossings around one vertex
    double wind_acc = 0;
  };
  std::vector<State> starts;
  for (int f : incident_faces(m, a)) {
    if (a.kind == SurfacePoint::Kind::Vertex) {
      for (int i = 0; i < 3; i++)
        if (m.corner_vertex(f, i) == a.id) {
          State st;
          st.face0 = st.face = f;
          st.start_slot = 3 * f + i;
          st.s = m.layout(f)[i];
          starts.push_back(st);
        }
    } else {
      State st;
      st.face0 = st.face = f;
      st.s = pos_in_face(m, a, f);
      starts.push_back(st);
    }
  }

  for (int attempt = 0; attempt < 4; attempt++) {
    found.clear();
    bool cap_hit = false;
    std::vector<State> stack = starts;
    while (!stack.empty()) {
      State st = std::move(stack.back());
      stack.pop_back();
      if (static_cast<int>(st.crossings.size()) > cap) {
        cap_hit = true;
        continue;
      }
      // Candidate endpoints of b in the current face.
      if (point_on_face(m, b, st.face)) {
        std::vector<std::pair<Vec2, int>> targets;  // (position in face chart, rep slot)
        if (b.kind == SurfacePoint::Kind::Vertex) {
          for (int i = 0; i < 3; i++)
            if (m.corner_vertex(st.face, i) == b.id)
              targets.push_back({m.layout(st.face)[i], 3 * st.face + i});
        } else {
          targets.push_back({pos_in_face(m, b, st.face), -1});
        }
        for (auto [t_local, b_rep] : targets) {
          Vec2 t = st.chart.apply(t_local);
          if (dist(st.s, t) > L_max + m.tol_len()) continue;
          auto strip = unfold_strip(m, st.face0, st.crossings);
          auto fp = funnel_shortest(st.portals, st.s, t, eps);
          if (fp.length > L_max + m.tol_len()) continue;
          auto mid = stations_from_funnel(m, strip, fp, eps * 4);
          std::vector<Station> sts;
          Station s_end;
          s_end.k = Station::End;
          s_end.pt = a;
          if (a.kind == SurfacePoint::Kind::Vertex) s_end.pt.rep = st.start_slot;
          sts.push_back(s_end);
          for (auto& stn : mid) sts.push_back(stn);
          Station t_end;
          t_end.k = Station::End;
          t_end.pt = b;
          if (b.kind == SurfacePoint::Kind::Vertex) t_end.pt.rep = b_rep;
          sts.push_back(t_end);
          push_candidate(stations_to_curve(m, sts));
        }
      }
      // Expand across the three sides.
      for (int j = 0; j < 3; j++) {
        int h = 3 * st.face + j;
        if (m.twin(h) < 0) continue;
        if (!st.crossings.empty() && h == m.twin(st.crossings.back())) continue;
        const auto& L = m.layout(st.face);
        Vec2 A = st.chart.apply(L[j]), B = st.chart.apply(L[(j + 1) % 3]);
        double lb = std::max(st.lower, point_segment_dist(A, B, st.s));
        if (lb <= L_max + m.tol_len() && !st.portals.empty()) {
          // Funnel to the portal midpoint, slackened by the half-length, is a
          // valid lower bound on any path that continues through this portal.
          Vec2 mid = (A + B) * 0.5;
          auto fp = funnel_shortest(st.portals, st.s, mid, eps);
          lb = std::max(lb, fp.length - dist(A, B) / 2);
        }
        if (lb > L_max + m.tol_len()) continue;
        State ns = st;
        // Winding prune: a taut development bends at a vertex at most once,
        // so consecutive crossings around one vertex subtend less than 2 pi.
        if (!st.crossings.empty()) {
          int p = m.twin(st.crossings.back());
          int jp = IntrinsicMesh::he_side(p);
          int shared = -1;
          for (int ci : {jp, (jp + 1) % 3})
            if (ci == j || ci == (j + 1) % 3) shared = ci;
          if (shared >= 0) {
            int v = m.corner_vertex(st.face, shared);
            double ang = m.corner_angle(st.face, shared);
            if (v == st.wind_vertex) ns.wind_acc = st.wind_acc + ang;
            else { ns.wind_vertex = v; ns.wind_acc = ang; }
            if (ns.wind_acc > 2 * M_PI + 0.25) continue;
          } else {
            ns.wind_vertex = -1;
            ns.wind_acc = 0;
          }
        }
        ns.lower = lb;
        ns.face = IntrinsicMesh::he_face(m.twin(h));
        ns.crossings.push_back(h);
        ns.portals.push_back({B, A});  // (left=head, right=tail)
        ns.chart = chart_transfer(m, h).then(st.chart);
        stack.push_back(std::move(ns));
      }
    }
    if (!cap_hit) break;
    if (attempt == 3) throw EnumerationCapExceeded("all_geodesics_between cap exceeded");
    cap *= 2;
  }
  std::sort(found.begin(), found.end(),
            [](const GeodesicPath& x, const GeodesicPath& y) { return x.length() < y.length(); });
  return found;
}

} // namespace geotri
