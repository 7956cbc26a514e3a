#include <cmath>

#include "doctest.h"
#include "geotri/errors.hpp"
#include "geotri/samples.hpp"
#include "geotri/curve.hpp"

using namespace geotri;

TEST_CASE("flat square mesh has no cone points") {
  auto m = sample_square();
  CHECK(m.face_count() == 2);
  CHECK(m.vertex_count() == 4);
  CHECK(m.total_area() == doctest::Approx(1.0));
  for (int v = 0; v < m.vertex_count(); v++) {
    CHECK(m.vertex_on_boundary(v));
  }
  CHECK(m.boundary_loops().size() == 1);
  CHECK(m.boundary_loops()[0].size() == 4);
}

TEST_CASE("cube has 8 cone points of angle 3pi/2") {
  auto m = sample_cube();
  CHECK(m.face_count() == 12);
  CHECK(m.vertex_count() == 8);
  CHECK(m.is_closed());
  CHECK(m.total_area() == doctest::Approx(6.0));
  int cones = 0;
  for (int v = 0; v < m.vertex_count(); v++) {
    CHECK(m.vertex_angle(v) == doctest::Approx(3 * M_PI / 2));
    if (m.is_cone_vertex(v)) cones++;
  }
  CHECK(cones == 8);
}

TEST_CASE("triangle inequality violation rejected") {
  MeshData d;
  d.faces = {{0, 1, 2}};
  d.halfedge_lengths = {1, 1, 2.5};
  CHECK_THROWS_AS(IntrinsicMesh::build(d), TriangleInequalityViolation);
}

TEST_CASE("flat torus is closed with a single flat vertex") {
  auto m = sample_torus();
  CHECK(m.is_closed());
  CHECK(m.vertex_count() == 1);
  CHECK(m.vertex_angle(0) == doctest::Approx(2 * M_PI));
  CHECK(!m.is_cone_vertex(0));
  CHECK(m.total_area() == doctest::Approx(1.0));
}

TEST_CASE("pillow has 4 cone points of angle pi") {
  auto m = sample_pillow();
  CHECK(m.is_closed());
  CHECK(m.vertex_count() == 4);
  CHECK(m.total_area() == doctest::Approx(2.0));
  for (int v = 0; v < 4; v++) CHECK(m.vertex_angle(v) == doctest::Approx(M_PI));
}

TEST_CASE("saddle has one interior vertex of angle 5pi/2") {
  auto m = sample_saddle();
  int interior = -1;
  for (int v = 0; v < m.vertex_count(); v++)
    if (!m.vertex_on_boundary(v)) interior = v;
  REQUIRE(interior >= 0);
  CHECK(m.vertex_angle(interior) == doctest::Approx(5 * M_PI / 2));
}

TEST_CASE("disconnected mesh rejected") {
  MeshData d;
  d.positions = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 5, 0}, {6, 5, 0}, {5, 6, 0}};
  d.faces = {{0, 1, 2}, {3, 4, 5}};
  CHECK_THROWS_AS(IntrinsicMesh::build(d), Disconnected);
}

TEST_CASE("curve length: diagonal of the unit square") {
  auto m = sample_square();
  // Face 0 = (0,0),(1,0),(1,1): corner 0 to corner 2 crosses face 0.
  auto a = make_point(m, 0, {1, 0, 0});
  auto b = make_point(m, 0, {0, 0, 1});
  SurfaceCurve c(m, {a, b});
  CHECK(c.length() == doctest::Approx(std::sqrt(2.0)));
  CHECK(curve_length(c.reversed()) == c.length());  // exact, cached
  // Constant curve.
  SurfaceCurve k(m, {a, a});
  CHECK(k.length() == 0.0);
}

TEST_CASE("curve arclength sampling and subcurves") {
  auto m = sample_square();
  auto a = make_point(m, 0, {0.9, 0.05, 0.05});
  auto mid = make_point(m, 0, {0.5, 0.0, 0.5});  // on the shared diagonal
  auto b = make_point(m, 1, {0.3, 0.2, 0.5});
  SurfaceCurve c(m, {a, mid, b});
  CHECK(c.segment_count() == 2);
  auto half = c.at_arclength(m, c.length() / 2);
  auto sub = c.sub_arclength(m, 0.1 * c.length(), 0.8 * c.length());
  CHECK(sub.length() == doctest::Approx(0.7 * c.length()));
  (void)half;
}

TEST_CASE("mesh hash is stable and sensitive") {
  auto m1 = sample_square();
  auto m2 = sample_square();
  auto m3 = sample_square(2.0);
  CHECK(m1.content_hash() == m2.content_hash());
  CHECK(m1.content_hash() != m3.content_hash());
}
