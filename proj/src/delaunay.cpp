#include "geotri/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "geotri/errors.hpp"

namespace geotri {

namespace {

// In-circle determinant: > 0 when d is strictly inside the circumcircle of
// CCW triangle (a,b,c). Scaled to length^4.
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double ax = a.x - d.x, ay = a.y - d.y;
  double bx = b.x - d.x, by = b.y - d.y;
  double cx = c.x - d.x, cy = c.y - d.y;
  double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

struct Mesh2 {
  std::vector<std::array<int, 3>> tris;

  int find_with_directed_edge(int a, int b, int skip = -1) const {
    for (int t = 0; t < static_cast<int>(tris.size()); t++) {
      if (t == skip) continue;
      for (int j = 0; j < 3; j++)
        if (tris[t][j] == a && tris[t][(j + 1) % 3] == b) return t;
    }
    return -1;
  }
};

} // namespace

std::vector<std::array<int, 3>> triangulate_constrained(
    const std::vector<Vec2>& pts, const std::vector<std::pair<int, int>>& constraints,
    double eps) {
  int n = static_cast<int>(pts.size());
  if (n < 3) throw Error("triangulate_constrained: need at least 3 points");
  if (orient2d(pts[0], pts[1], pts[2]) <= 0)
    throw Error("triangulate_constrained: seed triangle must be CCW");

  Mesh2 mesh;
  mesh.tris.push_back({0, 1, 2});

  // Split-based insertion: each step replaces triangles in place, so the
  // union always covers the seed triangle exactly.
  for (int p = 3; p < n; p++) {
    // Locate the triangle with the most interior position for p.
    int best_t = -1;
    double best_min = -1e300;
    for (int t = 0; t < static_cast<int>(mesh.tris.size()); t++) {
      double mn = 1e300;
      for (int j = 0; j < 3; j++) {
        Vec2 A = pts[mesh.tris[t][j]], B = pts[mesh.tris[t][(j + 1) % 3]];
        double len = dist(A, B) + 1e-300;
        mn = std::min(mn, orient2d(A, B, pts[p]) / len);
      }
      if (mn > best_min) { best_min = mn; best_t = t; }
    }
    if (best_t < 0 || best_min < -64 * eps)
      throw Error("triangulate_constrained: point outside the seed triangle");
    auto tri = mesh.tris[best_t];
    // On-edge test against the located triangle.
    int on_edge = -1;
    double best_abs = 4 * eps;
    for (int j = 0; j < 3; j++) {
      Vec2 A = pts[tri[j]], B = pts[tri[(j + 1) % 3]];
      double len = dist(A, B) + 1e-300;
      double d = std::abs(orient2d(A, B, pts[p])) / len;
      double t_on = (pts[p] - A).dot(B - A) / (len * len);
      if (d < best_abs && t_on > -1e-9 && t_on < 1 + 1e-9) { best_abs = d; on_edge = j; }
    }
    if (on_edge >= 0) {
      int a = tri[on_edge], b = tri[(on_edge + 1) % 3], c = tri[(on_edge + 2) % 3];
      int t2 = mesh.find_with_directed_edge(b, a, best_t);
      mesh.tris[best_t] = {a, p, c};
      mesh.tris.push_back({p, b, c});
      if (t2 >= 0) {
        int d = -1;
        for (int j = 0; j < 3; j++)
          if (mesh.tris[t2][j] == b && mesh.tris[t2][(j + 1) % 3] == a)
            d = mesh.tris[t2][(j + 2) % 3];
        mesh.tris[t2] = {b, p, d};
        mesh.tris.push_back({p, a, d});
      }
    } else {
      int a = tri[0], b = tri[1], c = tri[2];
      mesh.tris[best_t] = {a, b, p};
      mesh.tris.push_back({b, c, p});
      mesh.tris.push_back({c, a, p});
    }

    // Lawson pass: flip clearly non-Delaunay edges, conservatively.
    int budget = 8 * static_cast<int>(mesh.tris.size());
    bool improved = true;
    while (improved && budget-- > 0) {
      improved = false;
      for (int t = 0; t < static_cast<int>(mesh.tris.size()) && !improved; t++) {
        for (int j = 0; j < 3 && !improved; j++) {
          int a = mesh.tris[t][j], b = mesh.tris[t][(j + 1) % 3], c = mesh.tris[t][(j + 2) % 3];
          int t2 = mesh.find_with_directed_edge(b, a, t);
          if (t2 < 0) continue;
          int d = -1;
          for (int k = 0; k < 3; k++)
            if (mesh.tris[t2][k] == b && mesh.tris[t2][(k + 1) % 3] == a)
              d = mesh.tris[t2][(k + 2) % 3];
          double scale = std::pow(std::max({dist(pts[a], pts[b]), dist(pts[b], pts[c]),
                                            dist(pts[a], pts[d])}),
                                  4.0);
          if (incircle(pts[a], pts[b], pts[c], pts[d]) <= 1e-9 * scale) continue;
          if (orient2d(pts[a], pts[d], pts[c]) <= 0 || orient2d(pts[d], pts[b], pts[c]) <= 0)
            continue;
          mesh.tris[t] = {a, d, c};
          mesh.tris[t2] = {d, b, c};
          improved = true;
        }
      }
    }
  }

  auto& tris = mesh.tris;

  // Constraint recovery by edge flips.
  auto has_edge = [&](int a, int b) {
    for (auto& t : tris)
      for (int j = 0; j < 3; j++)
        if ((t[j] == a && t[(j + 1) % 3] == b) || (t[j] == b && t[(j + 1) % 3] == a)) return true;
    return false;
  };
  for (auto [a, b] : constraints) {
    int guard = 0;
    while (!has_edge(a, b)) {
      if (++guard > 4 * n * n + 64) throw Error("constraint recovery did not terminate");
      bool flipped = false;
      for (size_t t = 0; t < tris.size() && !flipped; t++) {
        for (int j = 0; j < 3 && !flipped; j++) {
          int c = tris[t][j], d = tris[t][(j + 1) % 3];
          if (c == a || c == b || d == a || d == b) continue;
          auto is = segment_intersection(pts[a], pts[b], pts[c], pts[d], eps * 1e-3);
          if (is.kind != SegIsect::Point) continue;
          if (is.t <= 1e-12 || is.t >= 1 - 1e-12) continue;
          int t2 = -1, x = -1, y = tris[t][(j + 2) % 3];
          for (size_t s = 0; s < tris.size(); s++) {
            if (s == t) continue;
            for (int k = 0; k < 3; k++)
              if (tris[s][k] == d && tris[s][(k + 1) % 3] == c) {
                t2 = static_cast<int>(s);
                x = tris[s][(k + 2) % 3];
              }
          }
          if (t2 < 0) continue;
          // Quad c -> x -> d -> y; flip the diagonal to x-y when both
          // replacement triangles are strictly CCW.
          if (orient2d(pts[c], pts[x], pts[y]) <= 0 || orient2d(pts[x], pts[d], pts[y]) <= 0)
            continue;
          tris[t] = {c, x, y};
          tris[t2] = {x, d, y};
          flipped = true;
        }
      }
      if (!flipped) throw Error("constraint recovery stuck");
    }
  }

  // Validation: positive areas, no edge shared more than twice, and exact
  // area coverage of the seed triangle.
  double area_sum = 0;
  for (auto& t : tris) {
    double a = orient2d(pts[t[0]], pts[t[1]], pts[t[2]]);
    if (a <= 0) throw Error("triangulation produced a non-CCW triangle");
    area_sum += a / 2;
  }
  double expect = orient2d(pts[0], pts[1], pts[2]) / 2;
  if (std::abs(area_sum - expect) > 1e-9 * std::max(1.0, expect))
    throw Error("triangulation does not cover the seed triangle");
  std::map<std::pair<int, int>, int> edge_mult;
  for (auto& t : tris)
    for (int j = 0; j < 3; j++) {
      auto key = std::minmax(t[j], t[(j + 1) % 3]);
      edge_mult[{key.first, key.second}]++;
    }
  for (auto& [key, c] : edge_mult)
    if (c > 2) throw Error("triangulation edge shared more than twice");
  return tris;
}

} // namespace geotri
