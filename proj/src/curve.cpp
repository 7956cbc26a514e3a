#include "geotri/curve.hpp"

#include <algorithm>

#include "geotri/errors.hpp"

namespace geotri {

SurfaceCurve::SurfaceCurve(const IntrinsicMesh& m, std::vector<SurfacePoint> pts,
                           const std::vector<int>& face_hints)
    : pts_(std::move(pts)) {
  int n = segment_count();
  seg_face_.resize(n);
  seg_len_.resize(n);
  double total = 0;
  for (int i = 0; i < n; i++) {
    int hint = i < static_cast<int>(face_hints.size()) ? face_hints[i] : -1;
    int f = shared_face(m, pts_[i], pts_[i + 1], hint);
    if (f < 0)
      throw Error("SurfaceCurve: consecutive points " + pts_[i].describe() + " / " +
                  pts_[i + 1].describe() + " share no face");
    seg_face_[i] = f;
    seg_len_[i] = in_face_distance(m, f, pts_[i], pts_[i + 1]);
    total += seg_len_[i];
  }
  total_len_ = total;
}

bool SurfaceCurve::is_closed(const IntrinsicMesh& m, double eps) const {
  return !pts_.empty() && same_point(m, pts_.front(), pts_.back(), eps);
}

SurfaceCurve SurfaceCurve::reversed() const {
  SurfaceCurve out;
  out.pts_.assign(pts_.rbegin(), pts_.rend());
  out.seg_face_.assign(seg_face_.rbegin(), seg_face_.rend());
  out.seg_len_.assign(seg_len_.rbegin(), seg_len_.rend());
  out.total_len_ = total_len_;
  return out;
}

SurfaceCurve SurfaceCurve::concatenated(const IntrinsicMesh& m, const SurfaceCurve& other,
                                        double eps) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  if (!same_point(m, back(), other.front(), eps))
    throw Error("concatenated: endpoints do not match");
  SurfaceCurve out;
  out.pts_ = pts_;
  out.pts_.insert(out.pts_.end(), other.pts_.begin() + 1, other.pts_.end());
  out.seg_face_ = seg_face_;
  out.seg_face_.insert(out.seg_face_.end(), other.seg_face_.begin(), other.seg_face_.end());
  out.seg_len_ = seg_len_;
  out.seg_len_.insert(out.seg_len_.end(), other.seg_len_.begin(), other.seg_len_.end());
  out.total_len_ = total_len_ + other.total_len_;
  return out;
}

std::vector<double> SurfaceCurve::cumulative_lengths() const {
  std::vector<double> cum(pts_.size(), 0);
  for (size_t i = 1; i < pts_.size(); i++) cum[i] = cum[i - 1] + seg_len_[i - 1];
  return cum;
}

SurfacePoint SurfaceCurve::at_arclength(const IntrinsicMesh& m, double s) const {
  if (pts_.empty()) throw Error("at_arclength on empty curve");
  if (s <= 0) return pts_.front();
  for (int i = 0; i < segment_count(); i++) {
    if (s <= seg_len_[i] || i == segment_count() - 1) {
      if (seg_len_[i] <= 0) { s = 0; continue; }
      double u = std::min(1.0, std::max(0.0, s / seg_len_[i]));
      int f = seg_face_[i];
      Vec2 a = pos_in_face(m, pts_[i], f);
      Vec2 b = pos_in_face(m, pts_[i + 1], f);
      return point_from_pos(m, f, a + (b - a) * u);
    }
    s -= seg_len_[i];
  }
  return pts_.back();
}

SurfaceCurve SurfaceCurve::sub_points(const IntrinsicMesh& m, int i0, int i1) const {
  std::vector<SurfacePoint> pts(pts_.begin() + i0, pts_.begin() + i1 + 1);
  std::vector<int> hints(seg_face_.begin() + i0, seg_face_.begin() + i1);
  return SurfaceCurve(m, std::move(pts), hints);
}

SurfaceCurve SurfaceCurve::sub_arclength(const IntrinsicMesh& m, double s0, double s1) const {
  s0 = std::max(0.0, s0);
  s1 = std::min(total_len_, s1);
  if (s1 < s0) std::swap(s0, s1);
  auto cum = cumulative_lengths();
  std::vector<SurfacePoint> pts;
  std::vector<int> hints;
  SurfacePoint a = at_arclength(m, s0);
  pts.push_back(a);
  for (int i = 1; i < static_cast<int>(pts_.size()); i++) {
    if (cum[i] <= s0) continue;
    if (cum[i] >= s1) break;
    hints.push_back(seg_face_[i - 1]);
    pts.push_back(pts_[i]);
  }
  hints.push_back(-1);
  pts.push_back(at_arclength(m, s1));
  // The first/last hints may be wrong when s0/s1 land mid-segment; recover
  // them from the segment the parameter falls in.
  double acc = 0;
  for (int i = 0; i < segment_count(); i++) {
    double next = acc + seg_len_[i];
    if (s0 >= acc && s0 <= next && !hints.empty()) hints.front() = seg_face_[i];
    if (s1 >= acc && s1 <= next) hints.back() = seg_face_[i];
    acc = next;
  }
  if (!hints.empty() && hints.front() < 0) hints.front() = seg_face_.empty() ? -1 : seg_face_.front();
  return SurfaceCurve(m, std::move(pts), hints);
}

SurfaceCurve SurfaceCurve::simplified(const IntrinsicMesh& m, double eps) const {
  if (pts_.size() < 2) return *this;
  std::vector<SurfacePoint> pts{pts_.front()};
  std::vector<int> hints;
  for (int i = 0; i < segment_count(); i++) {
    if (seg_len_[i] <= eps && i < segment_count() - 1) continue;  // drop null step
    // Merge with previous segment when collinear in a shared face.
    if (!hints.empty()) {
      int f_prev = hints.back();
      if (f_prev == seg_face_[i] && point_on_face(m, pts.back(), f_prev) &&
          pts.size() >= 2 && point_on_face(m, pts[pts.size() - 2], f_prev)) {
        Vec2 a = pos_in_face(m, pts[pts.size() - 2], f_prev);
        Vec2 b = pos_in_face(m, pts.back(), f_prev);
        Vec2 c = pos_in_face(m, pts_[i + 1], f_prev);
        if (std::abs(orient2d(a, b, c)) <= eps * std::max(dist(a, c), 1e-300) &&
            (b - a).dot(c - b) >= 0) {
          pts.back() = pts_[i + 1];
          continue;
        }
      }
    }
    hints.push_back(seg_face_[i]);
    pts.push_back(pts_[i + 1]);
  }
  if (pts.size() < 2) return *this;
  return SurfaceCurve(m, std::move(pts), hints);
}

double curve_length(const SurfaceCurve& c) { return c.length(); }

} // namespace geotri
