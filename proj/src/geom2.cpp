#include "geotri/geom2.hpp"

#include <algorithm>

namespace geotri {

SegIsect segment_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, double eps) {
  SegIsect out;
  Vec2 dp = p1 - p0, dq = q1 - q0;
  double denom = dp.cross(dq);
  double lp = dp.norm(), lq = dq.norm();

  auto param_on = [](Vec2 a, Vec2 b, Vec2 x) {
    Vec2 d = b - a;
    double n2 = d.norm2();
    return n2 > 0 ? (x - a).dot(d) / n2 : 0.0;
  };

  // Near-parallel: check for collinear overlap within eps.
  if (std::abs(denom) <= eps * std::max(lp, lq)) {
    if (lp <= 0 || lq <= 0) return out;
    if (point_segment_dist(p0, p1, q0) > eps && point_segment_dist(p0, p1, q1) > eps &&
        point_segment_dist(q0, q1, p0) > eps && point_segment_dist(q0, q1, p1) > eps)
      return out;
    // Project q endpoints on p.
    double t0 = param_on(p0, p1, q0), t1 = param_on(p0, p1, q1);
    double lo = std::max(0.0, std::min(t0, t1)), hi = std::min(1.0, std::max(t0, t1));
    if (hi < lo - eps / std::max(lp, 1e-300)) return out;
    lo = std::min(std::max(lo, 0.0), 1.0);
    hi = std::min(std::max(hi, 0.0), 1.0);
    // Verify the overlap midpoint really is close to q.
    Vec2 mid = p0 + dp * ((lo + hi) / 2);
    if (point_segment_dist(q0, q1, mid) > eps) return out;
    double u_lo = param_on(q0, q1, p0 + dp * lo);
    double u_hi = param_on(q0, q1, p0 + dp * hi);
    if (hi - lo <= eps / std::max(lp, 1e-300)) {
      out.kind = SegIsect::Point;
      out.t = (lo + hi) / 2;
      out.u = std::min(1.0, std::max(0.0, (u_lo + u_hi) / 2));
      return out;
    }
    out.kind = SegIsect::Overlap;
    out.t = lo; out.t1 = hi;
    out.u = std::min(1.0, std::max(0.0, u_lo));
    out.u1 = std::min(1.0, std::max(0.0, u_hi));
    return out;
  }

  double t = (q0 - p0).cross(dq) / denom;
  double u = (q0 - p0).cross(dp) / denom;
  double tol_t = eps / std::max(lp, 1e-300);
  double tol_u = eps / std::max(lq, 1e-300);
  if (t < -tol_t || t > 1 + tol_t || u < -tol_u || u > 1 + tol_u) return out;
  out.kind = SegIsect::Point;
  out.t = std::min(1.0, std::max(0.0, t));
  out.u = std::min(1.0, std::max(0.0, u));
  return out;
}

} // namespace geotri
