#include <cmath>

#include "doctest.h"
#include "geotri/samples.hpp"
#include "geotri/unfold.hpp"

using namespace geotri;

TEST_CASE("unfolding the square across its diagonal reproduces the square") {
  auto m = sample_square();
  // Face 0 chart equals world coordinates: (0,0),(1,0),(1,1).
  // Crossing the diagonal (side 2 of face 0) lays out face 1.
  StripLayout strip = unfold_strip(m, 0, {3 * 0 + 2});
  REQUIRE(strip.faces.size() == 2);
  // Vertex 3 = (0,1) is corner 2 of face 1.
  Vec2 v3 = strip.charts[1].apply(m.layout(1)[2]);
  CHECK(v3.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v3.y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trace_ray crosses the diagonal") {
  auto m = sample_square();
  auto start = make_point(m, 0, {0.3, 0.5, 0.2});  // world (0.5+0.2, 0.2) = (0.7, 0.2)
  Vec2 p0 = pos_in_face(m, start, 0);
  CHECK(p0.x == doctest::Approx(0.7));
  CHECK(p0.y == doctest::Approx(0.2));
  auto rt = trace_ray(m, start, 0, Vec2{-1, 1}.normalized(), 0.5 * std::sqrt(2.0));
  CHECK(rt.stop == RayTrace::Stop::Length);
  CHECK(rt.traced == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(rt.curve.length() == doctest::Approx(0.5 * std::sqrt(2.0)));
  // World endpoint should be (0.2, 0.7), in face 1.
  auto end = rt.curve.back();
  REQUIRE(end.kind == SurfacePoint::Kind::Face);
  CHECK(end.id == 1);
  // Face 1 corners are (0,0),(1,1),(0,1); recover world position.
  Vec2 world{end.bary[1] * 1.0 + end.bary[2] * 0.0, end.bary[1] * 1.0 + end.bary[2] * 1.0};
  CHECK(world.x == doctest::Approx(0.2));
  CHECK(world.y == doctest::Approx(0.7));
}

TEST_CASE("trace_ray stops at boundary and at vertices") {
  auto m = sample_square();
  auto start = make_point(m, 0, {0.3, 0.5, 0.2});
  auto rt = trace_ray(m, start, 0, Vec2{0, -1}, 10.0);
  CHECK(rt.stop == RayTrace::Stop::Boundary);
  CHECK(rt.traced == doctest::Approx(0.2));

  auto rt2 = trace_ray(m, start, 0, Vec2{1, -2. / 3}.normalized(), 10.0);
  CHECK(rt2.stop == RayTrace::Stop::Vertex);
  CHECK(rt2.hit_vertex == 1);  // world corner (1,0)
}

TEST_CASE("funnel: straight corridor") {
  std::vector<std::pair<Vec2, Vec2>> portals{{{0.5, 1}, {0.5, -1}}, {{1.5, 1}, {1.5, -1}}};
  auto path = funnel_shortest(portals, {0, 0}, {2, 0}, 1e-9);
  CHECK(path.length == doctest::Approx(2.0));
  REQUIRE(path.nodes.size() == 4);
  CHECK(path.nodes[1].pos.y == doctest::Approx(0.0));
  CHECK(path.nodes[2].pos.y == doctest::Approx(0.0));
}

TEST_CASE("funnel: forced bend at a portal endpoint") {
  // Portal pushed up: the path must bend around its right endpoint (1,1).
  std::vector<std::pair<Vec2, Vec2>> portals{{{1, 2}, {1, 1}}};
  auto path = funnel_shortest(portals, {0, 0}, {2, 0}, 1e-9);
  CHECK(path.length == doctest::Approx(2 * std::sqrt(2.0)));
  REQUIRE(path.nodes.size() == 3);
  CHECK(path.nodes[1].pos.x == doctest::Approx(1.0));
  CHECK(path.nodes[1].pos.y == doctest::Approx(1.0));
  CHECK(path.nodes[1].t == doctest::Approx(0.0));  // at the tail endpoint
}

TEST_CASE("funnel: zigzag corridor") {
  std::vector<std::pair<Vec2, Vec2>> portals{
      {{1, 3}, {1, 1}}, {{2, -1}, {2, -3}}, {{3, 3}, {3, 1}}};
  auto path = funnel_shortest(portals, {0, 0}, {4, 0}, 1e-9);
  double expect = 0;
  Vec2 a{0, 0}, b{1, 1}, c{2, -1}, d{3, 1}, e{4, 0};
  expect = dist(a, b) + dist(b, c) + dist(c, d) + dist(d, e);
  CHECK(path.length == doctest::Approx(expect));
}
