#include <cmath>

#include "doctest.h"
#include "geotri/convexity.hpp"
#include "geotri/errors.hpp"
#include "geotri/samples.hpp"

using namespace geotri;

namespace {

struct Fixture {
  IntrinsicMesh m = sample_square(10.0);
  MeshContext ctx{m};
  SurfacePoint p(double x, double y) {
    if (x >= y) {
      double b1 = (x - y) / 10, b2 = y / 10;
      return make_point(m, 0, {1 - b1 - b2, b1, b2});
    }
    double c1 = x / 10, c2 = (y - x) / 10;
    return make_point(m, 1, {1 - c1 - c2, c1, c2});
  }
  GeodesicPath seg(SurfacePoint a, SurfacePoint b) { return shortest_path(m, ctx.graph(8), a, b); }
  PolygonRegion quad(double x0, double y0, double x1, double y1) {
    std::vector<GeodesicPath> edges{seg(p(x0, y0), p(x1, y0)), seg(p(x1, y0), p(x1, y1)),
                                    seg(p(x1, y1), p(x0, y1)), seg(p(x0, y1), p(x0, y0))};
    return make_polygon(m, edges);
  }
};

}  // namespace

TEST_CASE("boundary convexity of a small centered square") {
  Fixture F;
  // K = side-0.1 square centered at (5,5), U = generous ball.
  auto K = F.quad(4.95, 4.95, 5.05, 5.05);
  CHECK(K.area == doctest::Approx(0.01));
  auto U = make_disk_neighborhood(F.ctx, F.p(5, 5), 2.0);
  auto cert = certify_boundary_convex(F.ctx, K, *U);
  CHECK(cert.all_ok());
  CHECK(cert.perimeter == doctest::Approx(0.4));
  CHECK(cert.margin_lower > 4 * 0.4);
  // An oversized ambient ball violates condition (2).
  auto U2 = make_disk_neighborhood(F.ctx, F.p(5, 5), 4.4);
  CHECK_THROWS_AS(certify_boundary_convex(F.ctx, K, *U2), Condition2Failed);
}

TEST_CASE("condition 3 fails for a reflex kink") {
  Fixture F;
  // L-shaped hexagon with a reflex corner at (5,5).
  auto s = [&](double ax, double ay, double bx, double by) {
    return F.seg(F.p(ax, ay), F.p(bx, by));
  };
  std::vector<GeodesicPath> edges{
      s(4.95, 4.95, 5.057, 4.95), s(5.057, 4.95, 5.057, 5.003), s(5.057, 5.003, 5.0, 5.003),
      s(5.0, 5.003, 5.0, 5.05),   s(5.0, 5.05, 4.95, 5.05),     s(4.95, 5.05, 4.95, 4.95)};
  auto K = make_polygon(F.m, edges);
  auto U = make_disk_neighborhood(F.ctx, F.p(5, 5), 2.1);
  ConvexityParams params;
  params.throw_on_fail = false;
  auto cert = certify_boundary_convex(F.ctx, K, *U, params);
  CHECK(!cert.cond3_ok);
  CHECK_THROWS_AS(certify_boundary_convex(F.ctx, K, *U), Condition3Failed);
}

TEST_CASE("complete convexity: convex quad yes, L-shape no") {
  Fixture F;
  auto K = F.quad(4.6, 4.6, 5.4, 5.4);
  auto U = make_disk_neighborhood(F.ctx, F.p(5, 5), 2.0);
  auto r = is_completely_convex(F.ctx, K, *U, 0.4);
  CHECK(r.convex);

  auto s = [&](double ax, double ay, double bx, double by) {
    return F.seg(F.p(ax, ay), F.p(bx, by));
  };
  std::vector<GeodesicPath> edges{s(4, 4, 6, 4), s(6, 4, 6, 5),   s(6, 5, 5, 5),
                                  s(5, 5, 5, 6), s(5, 6, 4, 6),   s(4, 6, 4, 4)};
  auto L = make_polygon(F.m, edges);
  auto rl = is_completely_convex(F.ctx, L, *U, 0.3);
  CHECK(!rl.convex);
  CHECK(rl.escaping.length() > 0);
}

TEST_CASE("certification is ambient-stable across two valid balls") {
  Fixture F;
  auto K = F.quad(4.96, 4.96, 5.04, 5.04);
  auto U1 = make_disk_neighborhood(F.ctx, F.p(5, 5), 2.0);
  auto U2 = make_disk_neighborhood(F.ctx, F.p(5.2, 5.1), 2.0);
  auto c1 = certify_boundary_convex(F.ctx, K, *U1);
  auto c2 = certify_boundary_convex(F.ctx, K, *U2);
  CHECK(c1.cond3_ok == c2.cond3_ok);
}

TEST_CASE("half-pillow bigon is not completely convex") {
  auto m = sample_pillow();
  MeshContext ctx(m);
  int e_left = -1, e_right = -1;
  for (int e = 0; e < m.edge_count(); e++) {
    int h = m.edge_halfedge(e);
    std::pair<int, int> pr{std::min(m.he_tail(h), m.he_head(h)),
                           std::max(m.he_tail(h), m.he_head(h))};
    if (pr == std::pair<int, int>{1, 2}) e_right = e;
    if (pr == std::pair<int, int>{0, 3}) e_left = e;
  }
  auto p = SurfacePoint::edge(e_left, 0.5);
  auto q = SurfacePoint::edge(e_right, 0.5);
  auto two = all_geodesics_between(m, p, q, 1.0 + 1e-9);
  REQUIRE(two.size() == 2);
  GeodesicPath back{two[1].curve.reversed(), two[1].cert};
  auto B = make_polygon(m, {two[0], back});
  CHECK(B.area == doctest::Approx(1.0));
  auto U = make_disk_neighborhood(ctx, p, 0.45);
  auto r = is_completely_convex(ctx, B, *U, 0.5);
  CHECK(!r.convex);
}

TEST_CASE("intersect_boundary_convex: overlapping quads") {
  Fixture F;
  auto U = make_disk_neighborhood(F.ctx, F.p(5, 5), 2.1);
  CertifiedPolygon K1{F.quad(4.96, 4.96, 5.04, 5.04), U, {}};
  K1.cert = certify_boundary_convex(F.ctx, K1.region, *U);
  CertifiedPolygon K2{F.quad(5.00, 5.00, 5.08, 5.08), U, {}};
  K2.cert = certify_boundary_convex(F.ctx, K2.region, *U);
  auto comps = intersect_boundary_convex(F.ctx, K1, K2);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].region.area == doctest::Approx(0.04 * 0.04));
  CHECK(comps[0].region.perimeter() <=
        std::min(K1.region.perimeter(), K2.region.perimeter()) + 1e-9);
  CHECK(comps[0].cert.all_ok());

  // Nested: K3 inside K1 comes back unchanged.
  CertifiedPolygon K3{F.quad(4.97, 4.97, 5.01, 5.01), U, {}};
  K3.cert = certify_boundary_convex(F.ctx, K3.region, *U);
  auto nested = intersect_boundary_convex(F.ctx, K1, K3);
  REQUIRE(nested.size() == 1);
  CHECK(nested[0].region.area == doctest::Approx(K3.region.area));

  // Disjoint: empty.
  CertifiedPolygon K4{F.quad(5.1, 4.8, 5.14, 4.84), U, {}};
  K4.cert = certify_boundary_convex(F.ctx, K4.region, *U);
  auto none = intersect_boundary_convex(F.ctx, K1, K4);
  CHECK(none.empty());
}

TEST_CASE("split_by_geodesic: diagonal splits a certified square") {
  Fixture F;
  auto U = make_disk_neighborhood(F.ctx, F.p(5, 5), 2.1);
  CertifiedPolygon P{F.quad(4.96, 4.96, 5.04, 5.04), U, {}};
  P.cert = certify_boundary_convex(F.ctx, P.region, *U);
  // Diagonal through the square, endpoints outside.
  auto gamma = F.seg(F.p(4.93, 4.93), F.p(5.07, 5.07));
  auto parts = split_by_geodesic(F.ctx, P, gamma);
  REQUIRE(parts.size() == 2);
  double total = 0;
  for (auto& q : parts) {
    CHECK(q.cert.all_ok());
    total += q.region.area;
    CHECK(4 * q.region.perimeter() < q.cert.margin_lower + 1e-9);
  }
  CHECK(total == doctest::Approx(P.region.area));

  // Disjoint geodesic: {P} unchanged.
  auto far = F.seg(F.p(4.5, 4.5), F.p(4.6, 4.5));
  auto same = split_by_geodesic(F.ctx, P, far);
  REQUIRE(same.size() == 1);
  CHECK(same[0].region.area == doctest::Approx(P.region.area));

  // Endpoint inside is rejected.
  auto bad = F.seg(F.p(5.0, 5.005), F.p(5.2, 5.2));
  CHECK_THROWS_AS(split_by_geodesic(F.ctx, P, bad), GeodesicEndpointInside);
}
