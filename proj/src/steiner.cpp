#include "geotri/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "geotri/errors.hpp"

namespace geotri {

SteinerGraph::SteinerGraph(const IntrinsicMesh& m, int n) : mesh_(&m) {
  int k = 1;
  while (k - 1 < n) k *= 2;
  per_edge_ = k - 1;  // interior nodes per edge at dyadic params i/k
  spacing_ = m.max_edge_length() / k;
  n_nodes_ = m.vertex_count() + m.edge_count() * per_edge_;
  face_nodes_.assign(m.face_count(), {});
  incid_.assign(n_nodes_, {});
  for (int f = 0; f < m.face_count(); f++) {
    const auto& L = m.layout(f);
    for (int i = 0; i < 3; i++) {
      int v = m.corner_vertex(f, i);
      face_nodes_[f].push_back({v, L[i], 3 * f + i});
      incid_[v].push_back({f, L[i], 3 * f + i});
    }
    for (int j = 0; j < 3; j++) {
      int h = 3 * f + j;
      int e = m.edge_of_he(h);
      bool canon = m.edge_halfedge(e) == h;
      if (!canon && m.twin(h) >= 0) continue;  // owner side registers both
      for (int s = 1; s <= per_edge_; s++) {
        int id = m.vertex_count() + e * per_edge_ + (s - 1);
        double t = static_cast<double>(s) / k;
        Vec2 pos = L[j] + (L[(j + 1) % 3] - L[j]) * t;
        face_nodes_[f].push_back({id, pos, -1});
        incid_[id].push_back({f, pos, -1});
        int ht = m.twin(h);
        if (ht >= 0) {
          int g = IntrinsicMesh::he_face(ht), jg = IntrinsicMesh::he_side(ht);
          const auto& Lg = m.layout(g);
          Vec2 posg = Lg[jg] + (Lg[(jg + 1) % 3] - Lg[jg]) * (1 - t);
          face_nodes_[g].push_back({id, posg, -1});
          incid_[id].push_back({g, posg, -1});
        }
      }
    }
  }
}

SurfacePoint SteinerGraph::node_point(int id) const {
  const auto& m = *mesh_;
  if (id < m.vertex_count()) return SurfacePoint::vertex(id);
  int e = (id - m.vertex_count()) / per_edge_;
  int s = (id - m.vertex_count()) % per_edge_ + 1;
  return SurfacePoint::edge(e, static_cast<double>(s) / (per_edge_ + 1));
}

std::vector<SteinerGraph::Incidence> SteinerGraph::point_incidences(const SurfacePoint& p) const {
  std::vector<Incidence> out;
  const auto& m = *mesh_;
  switch (p.kind) {
    case SurfacePoint::Kind::Vertex:
      for (int h : m.vertex_halfedges(p.id)) {
        int f = IntrinsicMesh::he_face(h);
        out.push_back({f, m.layout(f)[IntrinsicMesh::he_side(h)], h});
      }
      break;
    case SurfacePoint::Kind::Edge: {
      int h = m.edge_halfedge(p.id);
      int f = IntrinsicMesh::he_face(h);
      out.push_back({f, pos_in_face(m, p, f), -1});
      if (m.twin(h) >= 0) {
        int g = IntrinsicMesh::he_face(m.twin(h));
        out.push_back({g, pos_in_face(m, p, g), -1});
      }
      break;
    }
    case SurfacePoint::Kind::Face:
      out.push_back({p.id, pos_in_face(m, p, p.id), -1});
      break;
  }
  return out;
}

void SteinerGraph::run_dijkstra(const std::vector<std::pair<int, double>>& seeds,
                                std::vector<double>& out_dist, std::vector<int>& parent,
                                std::vector<int>& parent_face) const {
  out_dist.assign(n_nodes_, 1e300);
  parent.assign(n_nodes_, -1);
  parent_face.assign(n_nodes_, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto [node, d0] : seeds) {
    if (d0 < out_dist[node]) {
      out_dist[node] = d0;
      pq.push({d0, node});
    }
  }
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > out_dist[u] + 1e-15) continue;
    for (const auto& inc : incid_[u]) {
      for (const auto& fn : face_nodes_[inc.face]) {
        if (fn.node == u) continue;
        double nd = du + dist(inc.pos, fn.pos);
        if (nd < out_dist[fn.node] - 1e-15) {
          out_dist[fn.node] = nd;
          parent[fn.node] = u;
          parent_face[fn.node] = inc.face;
          pq.push({nd, fn.node});
        }
      }
    }
  }
}

SteinerGraph::PathResult SteinerGraph::shortest(const SurfacePoint& a, const SurfacePoint& b) const {
  const auto& m = *mesh_;
  PathResult out;
  auto inc_a = point_incidences(a);
  auto inc_b = point_incidences(b);

  // Direct same-face connection, over all representative pairs.
  double direct = 1e300;
  int direct_face = -1, direct_slot_a = -1, direct_slot_b = -1;
  for (const auto& ia : inc_a)
    for (const auto& ib : inc_b) {
      if (ia.face != ib.face) continue;
      double d = dist(ia.pos, ib.pos);
      if (d < direct) {
        direct = d;
        direct_face = ia.face;
        direct_slot_a = ia.slot;
        direct_slot_b = ib.slot;
      }
    }

  std::vector<std::pair<int, double>> seeds;
  for (const auto& ia : inc_a)
    for (const auto& fn : face_nodes_[ia.face]) seeds.push_back({fn.node, dist(ia.pos, fn.pos)});
  std::vector<double> d;
  std::vector<int> parent, parent_face;
  run_dijkstra(seeds, d, parent, parent_face);

  double best = direct;
  int best_node = -1;
  for (const auto& ib : inc_b)
    for (const auto& fn : face_nodes_[ib.face]) {
      double cand = d[fn.node] + dist(ib.pos, fn.pos);
      if (cand < best - 1e-15) {
        best = cand;
        best_node = fn.node;
      }
    }

  std::vector<SurfacePoint> pts;
  std::vector<int> hints;
  if (best_node < 0) {
    if (direct_face < 0) throw Error("SteinerGraph::shortest: no path found");
    SurfacePoint pa = a, pb = b;
    if (pa.kind == SurfacePoint::Kind::Vertex) pa.rep = direct_slot_a;
    if (pb.kind == SurfacePoint::Kind::Vertex) pb.rep = direct_slot_b;
    pts = {pa, pb};
    hints = {direct_face};
  } else {
    std::vector<int> chain{best_node};
    while (parent[chain.back()] >= 0) chain.push_back(parent[chain.back()]);
    std::reverse(chain.begin(), chain.end());
    // Drop graph nodes that coincide with the endpoints (zero-length hops).
    double eps0 = m.snap_eps();
    bool a_is_head = !chain.empty() && same_point(m, node_point(chain.front()), a, eps0);
    bool b_is_tail = !chain.empty() && same_point(m, node_point(chain.back()), b, eps0);
    // Resolve the first hop: an incidence of `a` whose face connection
    // realizes d[chain[0]].
    SurfacePoint pa = a;
    int first_face = -1;
    {
      double best_err = 1e300;
      for (const auto& ia : inc_a)
        for (const auto& fn : face_nodes_[ia.face]) {
          if (fn.node != chain[0]) continue;
          double err = std::abs(dist(ia.pos, fn.pos) - d[chain[0]]);
          if (err < best_err) {
            best_err = err;
            first_face = ia.face;
            if (pa.kind == SurfacePoint::Kind::Vertex) pa.rep = ia.slot;
          }
        }
    }
    // Resolve the last hop similarly.
    SurfacePoint pb = b;
    int last_face = -1;
    {
      double best_err = 1e300;
      for (const auto& ib : inc_b)
        for (const auto& fn : face_nodes_[ib.face]) {
          if (fn.node != best_node) continue;
          double err = std::abs(d[best_node] + dist(ib.pos, fn.pos) - best);
          if (err < best_err) {
            best_err = err;
            last_face = ib.face;
            if (pb.kind == SurfacePoint::Kind::Vertex) pb.rep = ib.slot;
          }
        }
    }
    pts.push_back(pa);
    hints.push_back(first_face);
    for (size_t i = 0; i < chain.size(); i++) {
      SurfacePoint np = node_point(chain[i]);
      if (np.kind == SurfacePoint::Kind::Vertex) {
        // Resolve corner slots on both sides from the relaxation distances.
        int f_in = (i == 0) ? first_face : parent_face[chain[i]];
        {
          double target = (i == 0) ? d[chain[0]] : d[chain[i]] - d[chain[i - 1]];
          double best_err = 1e300;
          for (const auto& fu : face_nodes_[f_in]) {
            if (fu.node != chain[i]) continue;
            if (i == 0) {
              for (const auto& ia : inc_a) {
                if (ia.face != f_in) continue;
                double err = std::abs(dist(ia.pos, fu.pos) - target);
                if (err < best_err) { best_err = err; np.rep = fu.slot; }
              }
            } else {
              for (const auto& fw : face_nodes_[f_in]) {
                if (fw.node != chain[i - 1]) continue;
                double err = std::abs(dist(fw.pos, fu.pos) - target);
                if (err < best_err) { best_err = err; np.rep = fu.slot; }
              }
            }
          }
        }
        if (i + 1 < chain.size()) {
          int f_out = parent_face[chain[i + 1]];
          double target = d[chain[i + 1]] - d[chain[i]];
          double best_err = 1e300;
          for (const auto& fu : face_nodes_[f_out]) {
            if (fu.node != chain[i]) continue;
            for (const auto& fw : face_nodes_[f_out]) {
              if (fw.node != chain[i + 1]) continue;
              double err = std::abs(dist(fu.pos, fw.pos) - target);
              if (err < best_err) {
                best_err = err;
                np.rep2 = fu.slot;
              }
            }
          }
        } else if (last_face >= 0) {
          for (const auto& fn : face_nodes_[last_face])
            if (fn.node == chain[i]) np.rep2 = fn.slot;
        }
        if (np.rep < 0) np.rep = np.rep2;
      }
      pts.push_back(np);
      if (i + 1 < chain.size()) hints.push_back(parent_face[chain[i + 1]]);
    }
    pts.push_back(pb);
    hints.push_back(last_face);
    if (b_is_tail) {
      pts.pop_back();
      hints.pop_back();
      if (!pts.empty() && pts.back().kind == SurfacePoint::Kind::Vertex) pts.back().rep2 = -1;
    }
    if (a_is_head) {
      pts.erase(pts.begin());
      hints.erase(hints.begin());
      if (!pts.empty() && pts.front().kind == SurfacePoint::Kind::Vertex)
        pts.front().rep = pts.front().rep2;
    }
  }
  out.curve = SurfaceCurve(m, std::move(pts), hints);
  out.length = best;
  if (std::abs(out.curve.length() - best) > 1e-6 * std::max(1.0, best))
    throw Error("SteinerGraph::shortest: reconstruction length mismatch");
  // Error model: each true edge crossing snaps to a node within half the
  // spacing; face changes along the found path estimate the crossing count.
  int crossings = 0;
  for (int i = 1; i < out.curve.segment_count(); i++)
    if (out.curve.segment_face(i) != out.curve.segment_face(i - 1)) crossings++;
  out.err_bound = spacing_ * (static_cast<double>(crossings) + 2.0);
  return out;
}

std::vector<double> SteinerGraph::distance_field(const std::vector<SurfacePoint>& sources) const {
  std::vector<std::pair<int, double>> seeds;
  for (const auto& p : sources)
    for (const auto& inc : point_incidences(p))
      for (const auto& fn : face_nodes_[inc.face]) seeds.push_back({fn.node, dist(inc.pos, fn.pos)});
  std::vector<double> d;
  std::vector<int> parent, parent_face;
  run_dijkstra(seeds, d, parent, parent_face);
  return d;
}

double SteinerGraph::field_at(const std::vector<double>& field, const SurfacePoint& p) const {
  double best = 1e300;
  for (const auto& inc : point_incidences(p))
    for (const auto& fn : face_nodes_[inc.face])
      best = std::min(best, field[fn.node] + dist(inc.pos, fn.pos));
  return best;
}

} // namespace geotri
