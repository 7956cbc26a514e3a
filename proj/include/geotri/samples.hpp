#pragma once

#include "geotri/mesh.hpp"

namespace geotri {

// Small reference surfaces used across tests, docs and smoke checks.

// Unit square [0,side]^2, two faces along the diagonal.
IntrinsicMesh sample_square(double side = 1.0);
// Unit cube surface, 12 faces; 8 cone points of angle 3*pi/2.
IntrinsicMesh sample_cube();
// Flat torus: unit square with opposite sides identified (abstract gluing).
IntrinsicMesh sample_torus();
// Doubled unit square pillow: two squares glued along their boundary;
// 4 cone points of angle pi.
IntrinsicMesh sample_pillow();
// One interior vertex of cone angle 5*pi/2 (five right isoceles triangles).
IntrinsicMesh sample_saddle();
// Unit square with a centered square hole of the given side (flat annulus).
IntrinsicMesh sample_square_annulus(double hole = 0.4);
// Lower half [0,1]x[0,1/2] of the unit square (surface with boundary).
IntrinsicMesh sample_half_square();

} // namespace geotri
