#include "geotri/point.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

SurfacePoint SurfacePoint::edge(int e, double t) {
  SurfacePoint p;
  p.kind = Kind::Edge;
  p.id = e;
  p.t = t;
  return p;
}

std::string SurfacePoint::describe() const {
  char buf[96];
  switch (kind) {
    case Kind::Vertex: std::snprintf(buf, sizeof buf, "vertex %d", id); break;
    case Kind::Edge: std::snprintf(buf, sizeof buf, "edge %d t=%.6g", id, t); break;
    case Kind::Face:
      std::snprintf(buf, sizeof buf, "face %d (%.6g,%.6g,%.6g)", id, bary[0], bary[1], bary[2]);
      break;
  }
  return buf;
}

SurfacePoint make_point(const IntrinsicMesh& m, int face, std::array<double, 3> bary) {
  double tol = m.tolerances().tol_bary;
  for (int i = 0; i < 3; i++)
    if (bary[i] < tol) bary[i] = 0;
  double s = bary[0] + bary[1] + bary[2];
  if (!(s > 0)) throw Error("make_point: degenerate barycentric coordinates");
  for (int i = 0; i < 3; i++) bary[i] /= s;

  int zeros = 0, zero_at = -1, one_at = -1;
  for (int i = 0; i < 3; i++) {
    if (bary[i] == 0) { zeros++; zero_at = i; }
    else one_at = i;
  }
  if (zeros == 2) return SurfacePoint::vertex(m.corner_vertex(face, one_at), 3 * face + one_at);
  if (zeros == 1) {
    int j = (zero_at + 1) % 3;  // side opposite corner zero_at
    int h = 3 * face + j;
    double t_local = bary[(j + 1) % 3];
    int e = m.edge_of_he(h);
    double t = (m.edge_halfedge(e) == h) ? t_local : 1 - t_local;
    return SurfacePoint::edge(e, t);
  }
  return SurfacePoint::face(face, bary);
}

std::vector<int> incident_faces(const IntrinsicMesh& m, const SurfacePoint& p) {
  std::vector<int> out;
  switch (p.kind) {
    case SurfacePoint::Kind::Vertex:
      for (int h : m.vertex_halfedges(p.id)) out.push_back(IntrinsicMesh::he_face(h));
      break;
    case SurfacePoint::Kind::Edge: {
      int h = m.edge_halfedge(p.id);
      out.push_back(IntrinsicMesh::he_face(h));
      if (m.twin(h) >= 0) out.push_back(IntrinsicMesh::he_face(m.twin(h)));
      break;
    }
    case SurfacePoint::Kind::Face:
      out.push_back(p.id);
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool point_on_face(const IntrinsicMesh& m, const SurfacePoint& p, int f) {
  switch (p.kind) {
    case SurfacePoint::Kind::Vertex:
      for (int i = 0; i < 3; i++)
        if (m.corner_vertex(f, i) == p.id) return true;
      return false;
    case SurfacePoint::Kind::Edge: {
      int h = m.edge_halfedge(p.id);
      if (IntrinsicMesh::he_face(h) == f) return true;
      return m.twin(h) >= 0 && IntrinsicMesh::he_face(m.twin(h)) == f;
    }
    case SurfacePoint::Kind::Face:
      return p.id == f;
  }
  return false;
}

std::array<double, 3> bary_in_face(const IntrinsicMesh& m, const SurfacePoint& p, int f) {
  std::array<double, 3> b{0, 0, 0};
  switch (p.kind) {
    case SurfacePoint::Kind::Vertex: {
      int corner = -1;
      if (p.rep >= 0 && IntrinsicMesh::he_face(p.rep) == f && m.he_tail(p.rep) == p.id)
        corner = IntrinsicMesh::he_side(p.rep);
      if (corner < 0 && p.rep2 >= 0 && IntrinsicMesh::he_face(p.rep2) == f &&
          m.he_tail(p.rep2) == p.id)
        corner = IntrinsicMesh::he_side(p.rep2);
      if (corner < 0)
        for (int i = 0; i < 3; i++)
          if (m.corner_vertex(f, i) == p.id) { corner = i; break; }
      if (corner < 0) throw Error("vertex point not on face");
      b[corner] = 1;
      return b;
    }
    case SurfacePoint::Kind::Edge: {
      int h = m.edge_halfedge(p.id);
      double t = p.t;
      if (IntrinsicMesh::he_face(h) != f) {
        h = m.twin(h);
        if (h < 0 || IntrinsicMesh::he_face(h) != f) throw Error("edge point not on face");
        t = 1 - t;
      }
      int j = IntrinsicMesh::he_side(h);
      b[j] = 1 - t;
      b[(j + 1) % 3] = t;
      return b;
    }
    case SurfacePoint::Kind::Face:
      if (p.id != f) throw Error("face point not on face");
      return p.bary;
  }
  return b;
}

Vec2 pos_in_face(const IntrinsicMesh& m, const SurfacePoint& p, int f) {
  auto b = bary_in_face(m, p, f);
  const auto& L = m.layout(f);
  return L[0] * b[0] + L[1] * b[1] + L[2] * b[2];
}

SurfacePoint point_from_pos(const IntrinsicMesh& m, int f, Vec2 pos) {
  const auto& L = m.layout(f);
  double area2 = orient2d(L[0], L[1], L[2]);
  std::array<double, 3> b;
  b[0] = orient2d(pos, L[1], L[2]) / area2;
  b[1] = orient2d(L[0], pos, L[2]) / area2;
  b[2] = orient2d(L[0], L[1], pos) / area2;
  double eps = m.snap_eps() / std::sqrt(std::max(area2, 1e-300));
  double tol = std::max(m.tolerances().tol_bary, eps);
  for (int i = 0; i < 3; i++)
    if (std::abs(b[i]) < tol) b[i] = 0;
  for (int i = 0; i < 3; i++)
    if (b[i] < 0) b[i] = 0;  // clamp slight outside
  double s = b[0] + b[1] + b[2];
  for (int i = 0; i < 3; i++) b[i] /= s;
  // Re-run the canonical lowering without re-snapping.
  int zeros = 0, zero_at = -1, one_at = -1;
  for (int i = 0; i < 3; i++) {
    if (b[i] == 0) { zeros++; zero_at = i; }
    else one_at = i;
  }
  if (zeros == 2) return SurfacePoint::vertex(m.corner_vertex(f, one_at), 3 * f + one_at);
  if (zeros == 1) {
    int j = (zero_at + 1) % 3;
    int h = 3 * f + j;
    double t_local = b[(j + 1) % 3];
    int e = m.edge_of_he(h);
    double t = (m.edge_halfedge(e) == h) ? t_local : 1 - t_local;
    return SurfacePoint::edge(e, t);
  }
  return SurfacePoint::face(f, b);
}

int shared_face(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b, int hint) {
  if (hint >= 0 && point_on_face(m, a, hint) && point_on_face(m, b, hint)) return hint;
  auto fa = incident_faces(m, a);
  for (int f : fa)
    if (point_on_face(m, b, f)) return f;
  return -1;
}

bool same_point(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b, double eps) {
  if (a.kind == SurfacePoint::Kind::Vertex && b.kind == SurfacePoint::Kind::Vertex)
    return a.id == b.id;
  int f = shared_face(m, a, b);
  if (f < 0) return false;
  return dist(pos_in_face(m, a, f), pos_in_face(m, b, f)) <= eps;
}

double in_face_distance(const IntrinsicMesh& m, int f, const SurfacePoint& a, const SurfacePoint& b) {
  return dist(pos_in_face(m, a, f), pos_in_face(m, b, f));
}

} // namespace geotri
