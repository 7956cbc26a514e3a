#include "geotri/cutcomplex.hpp"
#include <cstdio>

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#include "geotri/delaunay.hpp"
#include "geotri/errors.hpp"

namespace geotri {

namespace {

// Global node registry with snapping. Nodes are canonical surface points;
// vertex nodes are shared across all incident corners.
struct NodeRegistry {
  const IntrinsicMesh& m;
  double eps;
  std::vector<SurfacePoint> node_pt;
  std::vector<int> vertex_node;
  std::vector<std::vector<std::pair<double, int>>> edge_nodes;
  std::vector<std::vector<std::pair<Vec2, int>>> face_nodes;

  NodeRegistry(const IntrinsicMesh& mesh, double e)
      : m(mesh), eps(e), vertex_node(mesh.vertex_count(), -1),
        edge_nodes(mesh.edge_count()), face_nodes(mesh.face_count()) {}

  int add_vertex(int v) {
    if (vertex_node[v] < 0) {
      vertex_node[v] = static_cast<int>(node_pt.size());
      node_pt.push_back(SurfacePoint::vertex(v));
    }
    return vertex_node[v];
  }

  int add_edge_pt(int e, double t) {
    double eps_t = eps / m.edge_length(e);
    int h = m.edge_halfedge(e);
    if (t <= eps_t) return add_vertex(m.he_tail(h));
    if (t >= 1 - eps_t) return add_vertex(m.he_head(h));
    for (auto& [tt, id] : edge_nodes[e])
      if (std::abs(tt - t) <= eps_t) return id;
    int id = static_cast<int>(node_pt.size());
    node_pt.push_back(SurfacePoint::edge(e, t));
    edge_nodes[e].push_back({t, id});
    return id;
  }

  int add_point(const SurfacePoint& p) {
    switch (p.kind) {
      case SurfacePoint::Kind::Vertex:
        return add_vertex(p.id);
      case SurfacePoint::Kind::Edge:
        return add_edge_pt(p.id, p.t);
      case SurfacePoint::Kind::Face: {
        int f = p.id;
        Vec2 pos = pos_in_face(m, p, f);
        const auto& L = m.layout(f);
        for (int j = 0; j < 3; j++) {
          if (point_segment_dist(L[j], L[(j + 1) % 3], pos) <= eps) {
            double u = closest_param(L[j], L[(j + 1) % 3], pos);
            int h = 3 * f + j;
            int e = m.edge_of_he(h);
            return add_edge_pt(e, (m.edge_halfedge(e) == h) ? u : 1 - u);
          }
        }
        for (auto& [pp, id] : face_nodes[f])
          if (dist(pp, pos) <= eps) return id;
        int id = static_cast<int>(node_pt.size());
        node_pt.push_back(p);
        face_nodes[f].push_back({pos, id});
        return id;
      }
    }
    return -1;
  }
};

struct SegRec {
  int curve = -1;
  int face = -1;
  Vec2 a, b;
  int na = -1, nb = -1;
  bool on_edge = false;
  int edge = -1;
  double ta = 0, tb = 0;                       // canonical edge params when on_edge
  std::vector<std::pair<double, int>> splits;  // (param along a->b, node)
};

} // namespace

CutComplex CutComplex::build(const IntrinsicMesh& m, const std::vector<SurfaceCurve>& curves) {
  CutComplex cc;
  cc.mesh_ = &m;
  double eps = m.snap_eps();
  NodeRegistry reg(m, eps);

  for (int e = 0; e < m.edge_count(); e++) {
    int h = m.edge_halfedge(e);
    if (m.twin(h) >= 0 && IntrinsicMesh::he_face(h) == IntrinsicMesh::he_face(m.twin(h)))
      throw Error("CutComplex: edges glued to the same face are not supported");
  }

  // ---- Register curve points, classify segments.
  std::vector<SegRec> segs;
  std::vector<std::vector<int>> face_segs(m.face_count());
  std::vector<std::vector<int>> curve_segs(curves.size());
  for (int k = 0; k < static_cast<int>(curves.size()); k++) {
    const auto& c = curves[k];
    for (int i = 0; i < c.segment_count(); i++) {
      SegRec r;
      r.curve = k;
      r.face = c.segment_face(i);
      r.a = pos_in_face(m, c.point(i), r.face);
      r.b = pos_in_face(m, c.point(i + 1), r.face);
      r.na = reg.add_point(c.point(i).kind == SurfacePoint::Kind::Face
                               ? make_point(m, c.point(i).id, c.point(i).bary)
                               : c.point(i));
      r.nb = reg.add_point(c.point(i + 1).kind == SurfacePoint::Kind::Face
                               ? make_point(m, c.point(i + 1).id, c.point(i + 1).bary)
                               : c.point(i + 1));
      if (dist(r.a, r.b) <= eps) continue;  // null step
      // On-edge detection: both endpoints within eps of the same side.
      const auto& L = m.layout(r.face);
      for (int j = 0; j < 3; j++) {
        Vec2 A = L[j], B = L[(j + 1) % 3];
        if (point_segment_dist(A, B, r.a) <= eps && point_segment_dist(A, B, r.b) <= eps) {
          int h = 3 * r.face + j;
          int e = m.edge_of_he(h);
          double ua = closest_param(A, B, r.a), ub = closest_param(A, B, r.b);
          r.on_edge = true;
          r.edge = e;
          bool canon = m.edge_halfedge(e) == h;
          r.ta = canon ? ua : 1 - ua;
          r.tb = canon ? ub : 1 - ub;
          break;
        }
      }
      int idx = static_cast<int>(segs.size());
      segs.push_back(r);
      curve_segs[k].push_back(idx);
      if (!r.on_edge) face_segs[r.face].push_back(idx);
    }
  }

  // ---- Intersections among face-internal segments and with face sides.
  for (int f = 0; f < m.face_count(); f++) {
    auto& list = face_segs[f];
    for (size_t i = 0; i < list.size(); i++) {
      SegRec& s1 = segs[list[i]];
      for (size_t j = i + 1; j < list.size(); j++) {
        SegRec& s2 = segs[list[j]];
        auto is = segment_intersection(s1.a, s1.b, s2.a, s2.b, eps);
        if (is.kind == SegIsect::Point) {
          Vec2 pos = s1.a + (s1.b - s1.a) * is.t;
          int n = reg.add_point(point_from_pos(m, f, pos));
          s1.splits.push_back({is.t, n});
          s2.splits.push_back({is.u, n});
        } else if (is.kind == SegIsect::Overlap) {
          Vec2 p0 = s1.a + (s1.b - s1.a) * is.t;
          Vec2 p1 = s1.a + (s1.b - s1.a) * is.t1;
          int n0 = reg.add_point(point_from_pos(m, f, p0));
          int n1 = reg.add_point(point_from_pos(m, f, p1));
          s1.splits.push_back({is.t, n0});
          s1.splits.push_back({is.t1, n1});
          s2.splits.push_back({is.u, n0});
          s2.splits.push_back({is.u1, n1});
        }
      }
      const auto& L = m.layout(f);
      for (int j = 0; j < 3; j++) {
        auto is = segment_intersection(s1.a, s1.b, L[j], L[(j + 1) % 3], eps);
        if (is.kind == SegIsect::Point) {
          int h = 3 * f + j;
          int e = m.edge_of_he(h);
          double t = (m.edge_halfedge(e) == h) ? is.u : 1 - is.u;
          int n = reg.add_edge_pt(e, t);
          s1.splits.push_back({is.t, n});
        }
      }
    }
  }

  // ---- Split segments at any registered node lying on them.
  for (int f = 0; f < m.face_count(); f++) {
    std::vector<std::pair<Vec2, int>> candidates;
    const auto& L = m.layout(f);
    for (int i = 0; i < 3; i++) {
      int v = m.corner_vertex(f, i);
      if (reg.vertex_node[v] >= 0) candidates.push_back({L[i], reg.vertex_node[v]});
    }
    for (int j = 0; j < 3; j++) {
      int h = 3 * f + j;
      int e = m.edge_of_he(h);
      bool canon = m.edge_halfedge(e) == h;
      for (auto& [t, id] : reg.edge_nodes[e]) {
        double tl = canon ? t : 1 - t;
        candidates.push_back({L[j] + (L[(j + 1) % 3] - L[j]) * tl, id});
      }
    }
    for (auto& [pos, id] : reg.face_nodes[f]) candidates.push_back({pos, id});
    for (int si : face_segs[f]) {
      SegRec& s = segs[si];
      double len = dist(s.a, s.b);
      if (len <= 0) continue;
      for (auto& [pos, id] : candidates) {
        if (id == s.na || id == s.nb) continue;
        if (point_segment_dist(s.a, s.b, pos) <= eps) {
          double t = closest_param(s.a, s.b, pos);
          if (t > eps / len && t < 1 - eps / len) s.splits.push_back({t, id});
        }
      }
    }
  }

  // ---- Per-face local slots and triangulation.
  struct Slot {
    int node;
    Vec2 pos;
  };
  int n_faces = m.face_count();
  cc.face_tris_.assign(n_faces, {});
  std::vector<std::vector<Slot>> slots(n_faces);
  std::vector<std::array<int, 3>> tri_slots;  // per global tri: local slot ids
  std::map<std::tuple<int, int, int>, std::set<int>> constraint_curves;  // (f, lo, hi)
  std::vector<std::vector<std::vector<int>>> side_slots(n_faces);
  std::vector<std::map<std::pair<int, int>, std::vector<std::pair<int, int>>>> local_edge_tris(
      n_faces);
  std::vector<std::vector<std::array<double, 3>>> edge_covers(m.edge_count());
  for (auto& s : segs) {
    if (!s.on_edge) continue;
    double lo = std::min(s.ta, s.tb), hi = std::max(s.ta, s.tb);
    edge_covers[s.edge].push_back({lo, hi, static_cast<double>(s.curve)});
  }

  auto slot_of = [&](int f, int node, Vec2 pos) -> int {
    double best = 1e300;
    int best_i = -1;
    for (int i = 0; i < static_cast<int>(slots[f].size()); i++) {
      if (slots[f][i].node != node) continue;
      double d = dist(slots[f][i].pos, pos);
      if (d < best) { best = d; best_i = i; }
    }
    if (best_i < 0 || best > 16 * eps) return -1;
    return best_i;
  };

  for (int f = 0; f < n_faces; f++) {
    const auto& L = m.layout(f);
    for (int i = 0; i < 3; i++) slots[f].push_back({reg.add_vertex(m.corner_vertex(f, i)), L[i]});
    side_slots[f].assign(3, {});
    for (int j = 0; j < 3; j++) {
      int h = 3 * f + j;
      int e = m.edge_of_he(h);
      bool canon = m.edge_halfedge(e) == h;
      std::vector<std::pair<double, int>> ordered;
      for (auto& [t, id] : reg.edge_nodes[e]) ordered.push_back({canon ? t : 1 - t, id});
      std::sort(ordered.begin(), ordered.end());
      side_slots[f][j].push_back(j);
      for (auto& [tl, id] : ordered) {
        slots[f].push_back({id, L[j] + (L[(j + 1) % 3] - L[j]) * tl});
        side_slots[f][j].push_back(static_cast<int>(slots[f].size()) - 1);
      }
      side_slots[f][j].push_back((j + 1) % 3);
    }
    for (auto& [pos, id] : reg.face_nodes[f]) slots[f].push_back({id, pos});

    std::vector<std::pair<int, int>> local_constraints;
    for (int si : face_segs[f]) {
      SegRec& s = segs[si];
      s.splits.push_back({0.0, s.na});
      s.splits.push_back({1.0, s.nb});
      std::sort(s.splits.begin(), s.splits.end());
      s.splits.erase(std::unique(s.splits.begin(), s.splits.end(),
                                 [](auto& x, auto& y) { return x.second == y.second; }),
                     s.splits.end());
      for (size_t q = 0; q + 1 < s.splits.size(); q++) {
        int nu = s.splits[q].second, nv = s.splits[q + 1].second;
        if (nu == nv) continue;
        Vec2 pu = s.a + (s.b - s.a) * s.splits[q].first;
        Vec2 pv = s.a + (s.b - s.a) * s.splits[q + 1].first;
        int lu = slot_of(f, nu, pu), lv = slot_of(f, nv, pv);
        if (lu < 0 || lv < 0) throw Error("CutComplex: failed to resolve a segment endpoint slot");
        if (lu == lv) continue;
        bool on_side = false;
        for (int j = 0; j < 3 && !on_side; j++) {
          if (point_segment_dist(L[j], L[(j + 1) % 3], slots[f][lu].pos) <= eps &&
              point_segment_dist(L[j], L[(j + 1) % 3], slots[f][lv].pos) <= eps) {
            int h = 3 * f + j;
            int e = m.edge_of_he(h);
            bool canon = m.edge_halfedge(e) == h;
            double uu = closest_param(L[j], L[(j + 1) % 3], slots[f][lu].pos);
            double vv = closest_param(L[j], L[(j + 1) % 3], slots[f][lv].pos);
            if (!canon) { uu = 1 - uu; vv = 1 - vv; }
            edge_covers[e].push_back(
                {std::min(uu, vv), std::max(uu, vv), static_cast<double>(s.curve)});
            on_side = true;
          }
        }
        if (on_side) continue;
        auto key = std::minmax(lu, lv);
        local_constraints.push_back({key.first, key.second});
        constraint_curves[{f, key.first, key.second}].insert(s.curve);
      }
    }
    std::sort(local_constraints.begin(), local_constraints.end());
    local_constraints.erase(std::unique(local_constraints.begin(), local_constraints.end()),
                            local_constraints.end());

    std::vector<Vec2> pts;
    for (auto& sl : slots[f]) pts.push_back(sl.pos);
    auto local_tris = triangulate_constrained(pts, local_constraints, eps);

    double area_check = 0;
    for (auto& t : local_tris) {
      Tri tri;
      tri.base_face = f;
      for (int i = 0; i < 3; i++) {
        tri.nodes[i] = slots[f][t[i]].node;
        tri.pos[i] = slots[f][t[i]].pos;
      }
      tri.area = 0.5 * orient2d(tri.pos[0], tri.pos[1], tri.pos[2]);
      area_check += tri.area;
      int id = static_cast<int>(cc.tris_.size());
      cc.tris_.push_back(tri);
      tri_slots.push_back({t[0], t[1], t[2]});
      cc.face_tris_[f].push_back(id);
      for (int j = 0; j < 3; j++) {
        auto key = std::minmax(t[j], t[(j + 1) % 3]);
        local_edge_tris[f][{key.first, key.second}].push_back({id, j});
      }
    }
    if (std::abs(area_check - m.face_area(f)) > 1e-6 * std::max(1.0, m.face_area(f))) {
#ifdef GEOTRI_DEBUG_CUT
      std::fprintf(stderr, "face %d: area %.17g expect %.17g\n", f, area_check, m.face_area(f));
      for (size_t i = 0; i < slots[f].size(); i++)
        std::fprintf(stderr, "  slot %zu: node %d (%.17g, %.17g)\n", i, slots[f][i].node,
                     slots[f][i].pos.x, slots[f][i].pos.y);
      for (auto& [a, b] : local_constraints) std::fprintf(stderr, "  cons %d %d\n", a, b);
#endif
      throw Error("CutComplex: refined area mismatch on face " + std::to_string(f));
    }
  }
  cc.node_pt_ = reg.node_pt;

  // ---- Sides. Face-internal first, then stitched/boundary sides per edge.
  cc.tri_sides_.assign(cc.tris_.size(), {-1, -1, -1});
  auto directed_slots = [&](int tri, int j) {
    return std::make_pair(tri_slots[tri][j], tri_slots[tri][(j + 1) % 3]);
  };
  for (int f = 0; f < n_faces; f++) {
    std::map<std::pair<int, int>, int> on_face_side;
    for (int j = 0; j < 3; j++)
      for (size_t q = 0; q + 1 < side_slots[f][j].size(); q++) {
        auto key = std::minmax(side_slots[f][j][q], side_slots[f][j][q + 1]);
        on_face_side[{key.first, key.second}] = j;
      }
    for (auto& [key, refs] : local_edge_tris[f]) {
      if (on_face_side.count(key)) continue;
      if (refs.size() > 2)
        throw Error("CutComplex: local side shared by more than two triangles");
      Side s;
      s.tri0 = refs[0].first;
      s.side0 = refs[0].second;
      auto [sa, sb] = directed_slots(s.tri0, s.side0);
      s.node_a = slots[f][sa].node;
      s.node_b = slots[f][sb].node;
      if (refs.size() == 2) {
        s.tri1 = refs[1].first;
        s.side1 = refs[1].second;
      }
      auto it = constraint_curves.find({f, key.first, key.second});
      if (it != constraint_curves.end()) s.curves = it->second;
      int sid = static_cast<int>(cc.sides_.size());
      cc.sides_.push_back(s);
      cc.tri_sides_[s.tri0][s.side0] = sid;
      if (s.tri1 >= 0) cc.tri_sides_[s.tri1][s.side1] = sid;
    }
  }

  auto boundary_subedges = [&](int f, int j) {
    std::vector<std::pair<int, int>> out;
    for (size_t q = 0; q + 1 < side_slots[f][j].size(); q++) {
      auto key = std::minmax(side_slots[f][j][q], side_slots[f][j][q + 1]);
      auto it = local_edge_tris[f].find({key.first, key.second});
      if (it == local_edge_tris[f].end() || it->second.size() != 1)
        throw Error("CutComplex: face-side sub-edge not found uniquely");
      out.push_back(it->second[0]);
    }
    return out;
  };

  for (int e = 0; e < m.edge_count(); e++) {
    int h = m.edge_halfedge(e);
    int f = IntrinsicMesh::he_face(h), i = IntrinsicMesh::he_side(h);
    auto subs_f = boundary_subedges(f, i);
    std::vector<double> ts{0.0};
    for (auto& [t, id] : reg.edge_nodes[e]) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    ts.push_back(1.0);
    int ht = m.twin(h);
    std::vector<std::pair<int, int>> subs_g;
    if (ht >= 0) {
      subs_g = boundary_subedges(IntrinsicMesh::he_face(ht), IntrinsicMesh::he_side(ht));
      if (subs_g.size() != subs_f.size())
        throw Error("CutComplex: mismatched refinement across edge");
      std::reverse(subs_g.begin(), subs_g.end());
    }
    double eps_t = eps / m.edge_length(e);
    for (size_t q = 0; q < subs_f.size(); q++) {
      Side s;
      s.tri0 = subs_f[q].first;
      s.side0 = subs_f[q].second;
      s.base_edge = e;
      const Tri& T = cc.tris_[s.tri0];
      s.node_a = T.nodes[s.side0];
      s.node_b = T.nodes[(s.side0 + 1) % 3];
      if (ht >= 0) {
        s.tri1 = subs_g[q].first;
        s.side1 = subs_g[q].second;
      }
      double mid = (ts[q] + ts[q + 1]) / 2;
      for (auto& cov : edge_covers[e])
        if (cov[0] - eps_t <= mid && mid <= cov[1] + eps_t)
          s.curves.insert(static_cast<int>(cov[2]));
      int sid = static_cast<int>(cc.sides_.size());
      cc.sides_.push_back(s);
      cc.tri_sides_[s.tri0][s.side0] = sid;
      if (s.tri1 >= 0) cc.tri_sides_[s.tri1][s.side1] = sid;
    }
  }
  for (auto& row : cc.tri_sides_)
    for (int j = 0; j < 3; j++)
      if (row[j] < 0) throw Error("CutComplex: unassigned triangle side");

  // ---- Curve walks. Each consecutive node pair resolves to a directed side
  // via the host face's slots.
  auto walk_dir = [&](int f, int lu, int lv) -> std::pair<int, int> {
    auto key = std::minmax(lu, lv);
    auto it = local_edge_tris[f].find({key.first, key.second});
    if (it == local_edge_tris[f].end()) throw Error("CutComplex: walk side not found");
    auto [tri, j] = it->second[0];
    int sid = cc.tri_sides_[tri][j];
    const Side& sd = cc.sides_[sid];
    auto [sa, sb] = directed_slots(tri, j);
    (void)sb;
    bool tri_matches_ab = (sd.tri0 == tri && sd.side0 == j);
    bool traversal_matches_tri = (sa == lu);
    return {sid, (tri_matches_ab == traversal_matches_tri) ? 1 : -1};
  };
  cc.walks_.assign(curves.size(), {});
  for (int k = 0; k < static_cast<int>(curves.size()); k++) {
    for (int si : curve_segs[k]) {
      const SegRec& s = segs[si];
      int f = s.face;
      if (s.on_edge) {
        int j = -1;
        int h_can = m.edge_halfedge(s.edge);
        if (IntrinsicMesh::he_face(h_can) == f && m.edge_of_he(h_can) == s.edge)
          j = IntrinsicMesh::he_side(h_can);
        if (j < 0) {
          int htw = m.twin(h_can);
          if (htw >= 0 && IntrinsicMesh::he_face(htw) == f) j = IntrinsicMesh::he_side(htw);
        }
        if (j < 0) throw Error("CutComplex: on-edge segment face mismatch");
        bool canon = m.edge_halfedge(s.edge) == 3 * f + j;
        // Ordered slot pairs covered between ta and tb.
        std::vector<double> ts{0.0};
        for (auto& [t, id] : reg.edge_nodes[s.edge]) ts.push_back(t);
        std::sort(ts.begin(), ts.end());
        ts.push_back(1.0);
        double lo = std::min(s.ta, s.tb), hi = std::max(s.ta, s.tb);
        std::vector<std::pair<int, int>> pairs;  // local slot pairs in canonical t order
        for (size_t q = 0; q + 1 < ts.size(); q++) {
          double mid = (ts[q] + ts[q + 1]) / 2;
          if (mid <= lo || mid >= hi) continue;
          // side_slots runs in halfedge order; canonical t order flips on twin.
          int n_slots = static_cast<int>(side_slots[f][j].size());
          int q0 = canon ? static_cast<int>(q) : n_slots - 2 - static_cast<int>(q);
          pairs.push_back({side_slots[f][j][q0], side_slots[f][j][q0 + 1]});
        }
        bool forward = s.ta <= s.tb;
        if (!forward) std::reverse(pairs.begin(), pairs.end());
        for (auto [lu, lv] : pairs) {
          // Traversal runs in canonical +t when forward; slot pair is stored
          // in halfedge order, which is +t exactly when canon.
          int a = lu, b = lv;
          if (canon != forward) std::swap(a, b);
          cc.walks_[k].push_back(walk_dir(f, a, b));
        }
      } else {
        for (size_t q = 0; q + 1 < s.splits.size(); q++) {
          int nu = s.splits[q].second, nv = s.splits[q + 1].second;
          if (nu == nv) continue;
          Vec2 pu = s.a + (s.b - s.a) * s.splits[q].first;
          Vec2 pv = s.a + (s.b - s.a) * s.splits[q + 1].first;
          int lu = slot_of(f, nu, pu), lv = slot_of(f, nv, pv);
          if (lu == lv) continue;
          cc.walks_[k].push_back(walk_dir(f, lu, lv));
        }
      }
    }
  }

  return cc;
}

int CutComplex::neighbor(int t, int j) const {
  const Side& s = sides_[tri_sides_[t][j]];
  return (s.tri0 == t && s.side0 == j) ? s.tri1 : s.tri0;
}

bool CutComplex::side_is_mesh_boundary(int t, int j) const {
  return sides_[tri_sides_[t][j]].tri1 < 0;
}

int CutComplex::locate(const SurfacePoint& p) const {
  auto all = locate_all(p);
  return all.empty() ? -1 : all[0];
}

std::vector<int> CutComplex::locate_all(const SurfacePoint& p) const {
  std::vector<int> out;
  double eps = mesh_->snap_eps();
  for (int f : incident_faces(*mesh_, p)) {
    Vec2 pos = pos_in_face(*mesh_, p, f);
    for (int t : face_tris_[f]) {
      const Tri& T = tris_[t];
      bool inside = true;
      for (int j = 0; j < 3; j++) {
        double slen = dist(T.pos[j], T.pos[(j + 1) % 3]);
        if (orient2d(T.pos[j], T.pos[(j + 1) % 3], pos) < -eps * (slen + 1)) inside = false;
      }
      if (inside) out.push_back(t);
    }
  }
  return out;
}

CutComplex::RegionSet CutComplex::regions(const std::vector<int>& wall_curves) const {
  std::set<int> walls(wall_curves.begin(), wall_curves.end());
  return regions_by_predicate([&](int sid) {
    for (int cgi : sides_[sid].curves)
      if (walls.count(cgi)) return true;
    return false;
  });
}

CutComplex::RegionSet CutComplex::regions_by_predicate(
    const std::function<bool(int side)>& wall) const {
  auto is_wall = [&](int sid) {
    if (sides_[sid].tri1 < 0) return true;
    return wall(sid);
  };
  RegionSet rs;
  rs.region_of_tri.assign(tris_.size(), -1);
  for (int seed = 0; seed < static_cast<int>(tris_.size()); seed++) {
    if (rs.region_of_tri[seed] >= 0) continue;
    int rid = static_cast<int>(rs.regions.size());
    Region reg;
    std::queue<int> q;
    q.push(seed);
    rs.region_of_tri[seed] = rid;
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      reg.tris.push_back(t);
      reg.area += tris_[t].area;
      for (int j = 0; j < 3; j++) {
        int sid = tri_sides_[t][j];
        if (sides_[sid].tri1 < 0) reg.touches_mesh_boundary = true;
        if (is_wall(sid)) continue;
        int n = neighbor(t, j);
        if (n >= 0 && rs.region_of_tri[n] < 0) {
          rs.region_of_tri[n] = rid;
          q.push(n);
        }
      }
    }
    std::sort(reg.tris.begin(), reg.tris.end());
    rs.regions.push_back(std::move(reg));
  }

  for (auto& reg : rs.regions) {
    std::set<int> in_region(reg.tris.begin(), reg.tris.end());
    std::set<int> nodes, edges;
    std::set<std::pair<int, int>> pending;
    for (int t : reg.tris)
      for (int j = 0; j < 3; j++) {
        edges.insert(tri_sides_[t][j]);
        nodes.insert(tris_[t].nodes[j]);
        int sid = tri_sides_[t][j];
        int n = neighbor(t, j);
        if (is_wall(sid) || n < 0 || !in_region.count(n)) pending.insert({t, j});
      }
    reg.euler = static_cast<int>(nodes.size()) - static_cast<int>(edges.size()) +
                static_cast<int>(reg.tris.size());
    auto next_boundary = [&](std::pair<int, int> ts) {
      int guard = 0;
      int cand_t = ts.first, cand_j = (ts.second + 1) % 3;
      while (true) {
        if (++guard > 4 * static_cast<int>(tris_.size()) + 16)
          throw Error("CutComplex: boundary walk stuck");
        int sid = tri_sides_[cand_t][cand_j];
        int n = neighbor(cand_t, cand_j);
        if (is_wall(sid) || n < 0 || !in_region.count(n)) return std::make_pair(cand_t, cand_j);
        const Side& s = sides_[sid];
        int nt = (s.tri0 == cand_t && s.side0 == cand_j) ? s.tri1 : s.tri0;
        int nj = (s.tri0 == cand_t && s.side0 == cand_j) ? s.side1 : s.side0;
        cand_t = nt;
        cand_j = (nj + 1) % 3;
      }
    };
    while (!pending.empty()) {
      auto start = *pending.begin();
      std::vector<std::pair<int, int>> loop;
      auto cur = start;
      int guard = 0;
      do {
        if (++guard > 4 * static_cast<int>(sides_.size()) + 16)
          throw Error("CutComplex: boundary loop does not close");
        pending.erase(cur);
        int sid = tri_sides_[cur.first][cur.second];
        const Side& s = sides_[sid];
        int dir = (s.tri0 == cur.first && s.side0 == cur.second) ? 1 : -1;
        loop.push_back({sid, dir});
        cur = next_boundary(cur);
      } while (cur != start);
      reg.boundary_loops.push_back(std::move(loop));
    }
    reg.is_disk = false;
    if (reg.euler == 1 && reg.boundary_loops.size() == 1) {
      std::set<int> seen;
      bool simple = true;
      for (auto& [sid, dir] : reg.boundary_loops[0]) {
        int head = dir > 0 ? sides_[sid].node_b : sides_[sid].node_a;
        if (!seen.insert(head).second) simple = false;
      }
      reg.is_disk = simple;
    }
  }

  std::vector<int> order(rs.regions.size());
  for (size_t i = 0; i < order.size(); i++) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (rs.regions[a].area != rs.regions[b].area) return rs.regions[a].area > rs.regions[b].area;
    return rs.regions[a].tris[0] < rs.regions[b].tris[0];
  });
  std::vector<int> rank(order.size());
  for (size_t i = 0; i < order.size(); i++) rank[order[i]] = static_cast<int>(i);
  std::vector<Region> sorted;
  sorted.reserve(order.size());
  for (int i : order) sorted.push_back(std::move(rs.regions[i]));
  rs.regions = std::move(sorted);
  for (auto& r : rs.region_of_tri) r = rank[r];
  return rs;
}

int CutComplex::winding_number(int curve_k, const SurfacePoint& p,
                               const std::vector<int>& region_tris) const {
  return winding_number_walk(walks_[curve_k], p, region_tris);
}

int CutComplex::winding_number_walk(const std::vector<std::pair<int, int>>& walk,
                                    const SurfacePoint& p,
                                    const std::vector<int>& region_tris) const {
  std::map<int, int> mult;
  for (auto& [sid, dir] : walk) mult[sid] += dir;
  auto at = locate_all(p);
  if (at.empty()) throw Error("winding_number: point not located");
  for (int t : at)
    for (int j = 0; j < 3; j++) {
      if (!mult.count(tri_sides_[t][j])) continue;
      const Tri& T = tris_[t];
      Vec2 pos = pos_in_face(*mesh_, p, T.base_face);
      if (point_segment_dist(T.pos[j], T.pos[(j + 1) % 3], pos) <= mesh_->snap_eps())
        throw PointOnCurve("winding_number: point lies on the curve");
    }
  std::set<int> in_region(region_tris.begin(), region_tris.end());
  int start = -1;
  for (int t : at)
    if (in_region.count(t)) start = t;
  if (start < 0) throw Error("winding_number: point outside the region");
  std::map<int, std::pair<int, int>> parent;
  std::queue<int> q;
  q.push(start);
  parent[start] = {-1, -1};
  int exit_tri = -1, exit_side = -1;
  while (!q.empty() && exit_tri < 0) {
    int t = q.front();
    q.pop();
    for (int j = 0; j < 3; j++) {
      int sid = tri_sides_[t][j];
      int n = neighbor(t, j);
      if (n < 0 || !in_region.count(n)) {
        exit_tri = t;
        exit_side = sid;
        break;
      }
      if (!parent.count(n)) {
        parent[n] = {t, sid};
        q.push(n);
      }
    }
  }
  if (exit_tri < 0) throw Error("winding_number: region has no boundary to cut to");
  int winding = 0;
  auto cross_contrib = [&](int from_tri, int sid) {
    auto it = mult.find(sid);
    if (it == mult.end()) return 0;
    const Side& s = sides_[sid];
    int sign = (s.tri0 == from_tri) ? 1 : -1;
    return sign * it->second;
  };
  winding += cross_contrib(exit_tri, exit_side);
  int cur = exit_tri;
  while (parent[cur].first >= 0) {
    int prev = parent[cur].first, sid = parent[cur].second;
    winding += cross_contrib(prev, sid);
    cur = prev;
  }
  return winding;
}

SurfaceCurve CutComplex::walk_curve(const std::vector<std::pair<int, int>>& walk) const {
  std::vector<SurfacePoint> pts;
  std::vector<int> hints;
  for (auto& [sid, dir] : walk) {
    const Side& s = sides_[sid];
    int a = dir > 0 ? s.node_a : s.node_b;
    int b = dir > 0 ? s.node_b : s.node_a;
    if (pts.empty()) pts.push_back(node_pt_[a]);
    pts.push_back(node_pt_[b]);
    hints.push_back(tris_[s.tri0].base_face);
  }
  return SurfaceCurve(*mesh_, std::move(pts), hints);
}

SurfacePoint CutComplex::side_point(int side, int which) const {
  return node_pt_[which == 0 ? sides_[side].node_a : sides_[side].node_b];
}

double CutComplex::node_pair_distance(int a, int b) const {
  for (const auto& T : tris_) {
    int ia = -1, ib = -1;
    for (int j = 0; j < 3; j++) {
      if (T.nodes[j] == a) ia = j;
      if (T.nodes[j] == b) ib = j;
    }
    if (ia >= 0 && ib >= 0) return dist(T.pos[ia], T.pos[ib]);
  }
  return -1;
}

// ---- RegionMesh ----

RegionMesh::RegionMesh(std::shared_ptr<const CutComplex> cc, std::vector<int> region_tris)
    : cc_(std::move(cc)), tris_(std::move(region_tris)) {
  const CutComplex& C = *cc_;
  region_face_of_tri_.assign(C.tri_count(), -1);
  for (size_t i = 0; i < tris_.size(); i++) region_face_of_tri_[tris_[i]] = static_cast<int>(i);
  MeshData data;
  data.faces.resize(tris_.size());
  data.halfedge_lengths.assign(3 * tris_.size(), 0);
  for (size_t i = 0; i < tris_.size(); i++) {
    const auto& T = C.tri(tris_[i]);
    data.faces[i] = {T.nodes[0], T.nodes[1], T.nodes[2]};
    for (int j = 0; j < 3; j++)
      data.halfedge_lengths[3 * i + j] = dist(T.pos[j], T.pos[(j + 1) % 3]);
  }
  for (size_t i = 0; i < tris_.size(); i++) {
    for (int j = 0; j < 3; j++) {
      int sid = C.tri_side(tris_[i], j);
      const auto& s = C.side(sid);
      int other = (s.tri0 == static_cast<int>(tris_[i]) && s.side0 == j) ? s.tri1 : s.tri0;
      int other_side = (s.tri0 == static_cast<int>(tris_[i]) && s.side0 == j) ? s.side1 : s.side0;
      if (other < 0) continue;
      int ri = region_face_of_tri_[other];
      if (ri < 0) continue;
      int h1 = 3 * static_cast<int>(i) + j, h2 = 3 * ri + other_side;
      if (h1 < h2) data.gluings.push_back({h1, h2});
    }
  }
  mesh_ = std::make_unique<IntrinsicMesh>(IntrinsicMesh::build(data, C.base().tolerances()));
}

int RegionMesh::base_face_of(int region_face) const {
  return cc_->tri(tris_[region_face]).base_face;
}

SurfacePoint RegionMesh::to_region(const SurfacePoint& base_pt) const {
  const CutComplex& C = *cc_;
  for (int t : C.locate_all(base_pt)) {
    int rf = region_face_of_tri_[t];
    if (rf < 0) continue;
    const auto& T = C.tri(t);
    Vec2 pos = pos_in_face(C.base(), base_pt, T.base_face);
    double area2 = orient2d(T.pos[0], T.pos[1], T.pos[2]);
    std::array<double, 3> b;
    b[0] = orient2d(pos, T.pos[1], T.pos[2]) / area2;
    b[1] = orient2d(T.pos[0], pos, T.pos[2]) / area2;
    b[2] = orient2d(T.pos[0], T.pos[1], pos) / area2;
    for (auto& x : b) x = std::max(0.0, x);
    double ssum = b[0] + b[1] + b[2];
    for (auto& x : b) x /= ssum;
    return make_point(*mesh_, rf, b);
  }
  throw Error("RegionMesh::to_region: point not inside the region");
}

SurfacePoint RegionMesh::to_base(const SurfacePoint& region_pt) const {
  int rf = incident_faces(*mesh_, region_pt)[0];
  auto b = bary_in_face(*mesh_, region_pt, rf);
  const auto& T = cc_->tri(tris_[rf]);
  Vec2 pos = T.pos[0] * b[0] + T.pos[1] * b[1] + T.pos[2] * b[2];
  return point_from_pos(cc_->base(), T.base_face, pos);
}

SurfaceCurve RegionMesh::to_region(const SurfaceCurve& c) const {
  // Continuity-aware mapping: each segment is hosted by one region face, so
  // points on pinched region boundaries resolve to consistent copies.
  const CutComplex& C = *cc_;
  const auto& base = C.base();
  auto point_in_tri = [&](const SurfacePoint& p, int t) {
    const auto& T = C.tri(t);
    if (!point_on_face(base, p, T.base_face)) return false;
    Vec2 pos = pos_in_face(base, p, T.base_face);
    for (int j = 0; j < 3; j++) {
      double slen = dist(T.pos[j], T.pos[(j + 1) % 3]);
      if (orient2d(T.pos[j], T.pos[(j + 1) % 3], pos) < -base.snap_eps() * (slen + 1))
        return false;
    }
    return true;
  };
  auto rep_in_face = [&](const SurfacePoint& p, int rf) {
    int t = tris_[rf];
    const auto& T = C.tri(t);
    Vec2 pos = pos_in_face(base, p, T.base_face);
    double area2 = orient2d(T.pos[0], T.pos[1], T.pos[2]);
    std::array<double, 3> b;
    b[0] = orient2d(pos, T.pos[1], T.pos[2]) / area2;
    b[1] = orient2d(T.pos[0], pos, T.pos[2]) / area2;
    b[2] = orient2d(T.pos[0], T.pos[1], pos) / area2;
    for (auto& x : b) x = std::max(0.0, x);
    double ssum = b[0] + b[1] + b[2];
    for (auto& x : b) x /= ssum;
    return make_point(*mesh_, rf, b);
  };
  std::vector<SurfacePoint> pts;
  std::vector<int> hints;
  if (c.segment_count() == 0) return SurfaceCurve(*mesh_, {to_region(c.front())});
  for (int i = 0; i < c.segment_count(); i++) {
    const auto& a = c.point(i);
    const auto& b = c.point(i + 1);
    int host = -1;
    for (int t : C.locate_all(a)) {
      int rf = region_face_of_tri_[t];
      if (rf < 0) continue;
      if (point_in_tri(b, t)) { host = rf; break; }
    }
    if (host < 0) throw Error("RegionMesh::to_region: segment not inside the region");
    if (pts.empty()) pts.push_back(rep_in_face(a, host));
    pts.push_back(rep_in_face(b, host));
    hints.push_back(host);
  }
  return SurfaceCurve(*mesh_, std::move(pts), hints);
}

SurfaceCurve RegionMesh::to_base(const SurfaceCurve& c) const {
  std::vector<SurfacePoint> pts;
  std::vector<int> hints;
  for (auto& p : c.points()) pts.push_back(to_base(p));
  for (int i = 0; i < c.segment_count(); i++) hints.push_back(base_face_of(c.segment_face(i)));
  return SurfaceCurve(cc_->base(), std::move(pts), hints);
}

} // namespace geotri
