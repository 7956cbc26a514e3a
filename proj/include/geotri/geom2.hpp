#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace geotri {

struct Vec2 {
  double x = 0, y = 0;
  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  Vec2 normalized() const { double n = norm(); return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0}; }
  Vec2 perp() const { return {-y, x}; }
  double angle() const { return std::atan2(y, x); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dist(Vec2 a, Vec2 b) { return (a - b).norm(); }

// Signed double area of triangle (a,b,c); positive when CCW.
inline double orient2d(Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); }

inline Vec2 rotate(Vec2 v, double ang) {
  double c = std::cos(ang), s = std::sin(ang);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Interior angle at b of the wedge a-b-c, in [0, 2pi).
inline double wedge_angle(Vec2 b, Vec2 a, Vec2 c) {
  double ang = (a - b).angle() - (c - b).angle();
  while (ang < 0) ang += 2 * M_PI;
  while (ang >= 2 * M_PI) ang -= 2 * M_PI;
  return ang;
}

// Closest parameter on segment [a,b] for point p, clamped to [0,1].
inline double closest_param(Vec2 a, Vec2 b, Vec2 p) {
  Vec2 d = b - a;
  double n2 = d.norm2();
  if (n2 <= 0) return 0;
  double t = (p - a).dot(d) / n2;
  return std::min(1.0, std::max(0.0, t));
}

inline double point_segment_dist(Vec2 a, Vec2 b, Vec2 p) {
  double t = closest_param(a, b, p);
  return dist(a + (b - a) * t, p);
}

struct SegIsect {
  enum Kind { None, Point, Overlap } kind = None;
  // Point: (t, u) parameters on the two segments.
  // Overlap: [t0,t1] on the first segment, with matching u0,u1 on the second.
  double t = 0, u = 0;
  double t1 = 0, u1 = 0;
};

// Intersection of segments p0-p1 and q0-q1 with absolute tolerance eps on
// positions. Near-parallel segments closer than eps are reported as overlaps.
SegIsect segment_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double eps);

} // namespace geotri
