#pragma once

#include <array>
#include <utility>
#include <vector>

#include "geotri/geom2.hpp"

namespace geotri {

// Triangulation of a planar point set with constraint segments. Constraints
// must be pairwise non-crossing and contain no other input point in their
// interiors; the convex hull of the points is triangulated fully. Returns
// CCW triangles of point indices.
std::vector<std::array<int, 3>> triangulate_constrained(
    const std::vector<Vec2>& pts, const std::vector<std::pair<int, int>>& constraints,
    double eps);

} // namespace geotri
