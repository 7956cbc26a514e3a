#pragma once

#include <array>
#include <string>
#include <vector>

#include "geotri/mesh.hpp"

namespace geotri {

// A point on the surface in canonical form: exactly one of vertex / edge
// point / face interior. Edge points carry the parameter along the canonical
// halfedge of the edge, so both sides agree on the representative.
struct SurfacePoint {
  enum class Kind { Vertex, Edge, Face };
  Kind kind = Kind::Face;
  int id = -1;      // vertex id, edge id, or face id
  double t = 0;     // edge parameter in (0,1), canonical orientation
  std::array<double, 3> bary{0, 0, 0};  // face points only
  // Vertex points on abstract gluings may touch one face at several corners;
  // rep records a corner slot (halfedge id) resolving the geometry, rep2 a
  // second slot for the outgoing side of path interiors. Ignored by equality.
  int rep = -1;
  int rep2 = -1;

  static SurfacePoint vertex(int v, int rep_corner = -1) {
    SurfacePoint p; p.kind = Kind::Vertex; p.id = v; p.rep = rep_corner; return p;
  }
  static SurfacePoint edge(int e, double t);
  static SurfacePoint face(int f, std::array<double, 3> b) {
    SurfacePoint p; p.kind = Kind::Face; p.id = f; p.bary = b; return p;
  }

  bool operator==(const SurfacePoint& o) const {
    return kind == o.kind && id == o.id && t == o.t && bary == o.bary;
  }
  std::string describe() const;
};

// Canonicalizes a raw (face, barycentric) pair: snaps within tol_bary,
// renormalizes and lowers to edge/vertex form where applicable.
SurfacePoint make_point(const IntrinsicMesh& m, int face, std::array<double, 3> bary);

// All faces containing the point (one for interior points, two for edge
// points, the full star for vertices).
std::vector<int> incident_faces(const IntrinsicMesh& m, const SurfacePoint& p);

// True if the point lies on face f (possibly on its boundary).
bool point_on_face(const IntrinsicMesh& m, const SurfacePoint& p, int f);

// Barycentric coordinates of p within face f; requires point_on_face.
std::array<double, 3> bary_in_face(const IntrinsicMesh& m, const SurfacePoint& p, int f);

// Position of p in face f's local chart; requires point_on_face.
Vec2 pos_in_face(const IntrinsicMesh& m, const SurfacePoint& p, int f);

// Canonical point from a local-chart position in face f (snaps to the
// boundary of the face within eps).
SurfacePoint point_from_pos(const IntrinsicMesh& m, int f, Vec2 pos);

// A shared face of two points, or -1. Prefers the face `hint` when valid.
int shared_face(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b, int hint = -1);

bool same_point(const IntrinsicMesh& m, const SurfacePoint& a, const SurfacePoint& b, double eps);

// Ambient-space distance between two points of one face (straight segment).
double in_face_distance(const IntrinsicMesh& m, int f, const SurfacePoint& a, const SurfacePoint& b);

} // namespace geotri
