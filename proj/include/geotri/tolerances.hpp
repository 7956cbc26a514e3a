#pragma once

namespace geotri {

// Numeric policy. tol_len/tol_area are relative factors resolved against the
// mesh scale (max edge length) and total area; the rest are absolute.
struct Tolerances {
  double tol_len_factor = 1e-9;   // times mesh scale
  double tol_area_factor = 1e-8;  // times total area
  double tol_bary = 1e-12;        // barycentric snapping
  double tol_angle = 1e-7;        // radians, geodesic certificates
  double h_net = 0.0;             // sample-net spacing; 0 = auto (eps/8)
  double h_arc_div = 64.0;        // condition-(3) arcs per boundary length
  double snap = 1e-7;             // times mesh scale, arrangement node merging

  double tol_len(double mesh_scale) const { return tol_len_factor * mesh_scale; }
  double tol_area(double total_area) const { return tol_area_factor * total_area; }
  double snap_eps(double mesh_scale) const { return snap * mesh_scale; }
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t;
  return t;
}

} // namespace geotri
