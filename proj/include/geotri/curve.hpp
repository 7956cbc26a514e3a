#pragma once

#include <vector>

#include "geotri/point.hpp"

namespace geotri {

// Piecewise-straight curve: each segment lies inside one face. Total length
// is cached at construction so reversal preserves it exactly.
class SurfaceCurve {
public:
  SurfaceCurve() = default;
  // face_hints, when given, fixes the host face per segment (needed for
  // segments running along an edge, where both sides are valid hosts).
  SurfaceCurve(const IntrinsicMesh& m, std::vector<SurfacePoint> pts,
               const std::vector<int>& face_hints = {});

  int segment_count() const { return pts_.empty() ? 0 : static_cast<int>(pts_.size()) - 1; }
  const std::vector<SurfacePoint>& points() const { return pts_; }
  const SurfacePoint& point(int i) const { return pts_[i]; }
  const SurfacePoint& front() const { return pts_.front(); }
  const SurfacePoint& back() const { return pts_.back(); }
  int segment_face(int i) const { return seg_face_[i]; }
  double segment_length(int i) const { return seg_len_[i]; }
  double length() const { return total_len_; }
  bool empty() const { return pts_.empty(); }
  bool is_closed(const IntrinsicMesh& m, double eps) const;

  SurfaceCurve reversed() const;
  SurfaceCurve concatenated(const IntrinsicMesh& m, const SurfaceCurve& other, double eps) const;

  // Arc-length position: returns the point at distance s from the start,
  // clamped to [0, length].
  SurfacePoint at_arclength(const IntrinsicMesh& m, double s) const;
  // Prefix sums of segment lengths; entry i is the arc length at point i.
  std::vector<double> cumulative_lengths() const;

  // Subcurve between arc-length parameters [s0, s1] (s0 <= s1).
  SurfaceCurve sub_arclength(const IntrinsicMesh& m, double s0, double s1) const;
  // Subcurve between vertex indices, splitting at exact stored points.
  SurfaceCurve sub_points(const IntrinsicMesh& m, int i0, int i1) const;

  // Drops zero-length segments and merges collinear runs within one face.
  SurfaceCurve simplified(const IntrinsicMesh& m, double eps) const;

private:
  std::vector<SurfacePoint> pts_;
  std::vector<int> seg_face_;
  std::vector<double> seg_len_;
  double total_len_ = 0;
};

double curve_length(const SurfaceCurve& c);

} // namespace geotri
