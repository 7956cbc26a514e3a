#include <cmath>
#include <random>

#include "doctest.h"
#include "geotri/cutcomplex.hpp"
#include "geotri/errors.hpp"
#include "geotri/samples.hpp"

using namespace geotri;

namespace {

SurfaceCurve straight(const IntrinsicMesh& m, int f0, std::array<double, 3> b0,
                      std::array<double, 3> b1) {
  auto a = make_point(m, f0, b0);
  auto b = make_point(m, f0, b1);
  return SurfaceCurve(m, {a, b}, {f0});
}

} // namespace

TEST_CASE("cut square along its diagonal: two half regions") {
  auto m = sample_square();
  // The diagonal is the shared mesh edge between corners (0,0) and (1,1).
  SurfaceCurve diag(m, {SurfacePoint::vertex(m.corner_vertex(0, 0), 0),
                        SurfacePoint::vertex(m.corner_vertex(0, 2), 2)},
                    {0});
  auto cc = CutComplex::build(m, {diag});
  auto rs = cc.regions({0});
  REQUIRE(rs.regions.size() == 2);
  CHECK(rs.regions[0].area == doctest::Approx(0.5));
  CHECK(rs.regions[1].area == doctest::Approx(0.5));
  CHECK(rs.regions[0].is_disk);
  CHECK(rs.regions[1].is_disk);
}

TEST_CASE("cut square along both diagonals: four quarters") {
  auto m = sample_square();
  SurfaceCurve diag(m, {SurfacePoint::vertex(m.corner_vertex(0, 0), 0),
                        SurfacePoint::vertex(m.corner_vertex(0, 2), 2)},
                    {0});
  // Anti-diagonal from (1,0) to (0,1) crosses both faces through the center.
  SurfaceCurve anti(m, {SurfacePoint::vertex(m.corner_vertex(0, 1), 1),
                        make_point(m, 0, {0.5, 0.0, 0.5}),
                        SurfacePoint::vertex(m.corner_vertex(1, 2), 3 * 1 + 2)},
                    {0, 1});
  auto cc = CutComplex::build(m, {diag, anti});
  auto rs = cc.regions({0, 1});
  REQUIRE(rs.regions.size() == 4);
  for (auto& r : rs.regions) {
    CHECK(r.area == doctest::Approx(0.25));
    CHECK(r.is_disk);
  }
  // Cutting along only the anti-diagonal gives two regions.
  auto rs2 = cc.regions({1});
  REQUIRE(rs2.regions.size() == 2);
  CHECK(rs2.regions[0].area == doctest::Approx(0.5));
}

TEST_CASE("cut torus along a non-separating loop: one annulus") {
  auto m = sample_torus();
  // The bottom edge of the square is a closed loop through the vertex.
  SurfaceCurve loop(m, {SurfacePoint::vertex(0, 0), SurfacePoint::vertex(0, 1)}, {0});
  REQUIRE(loop.is_closed(m, 1e-9));
  auto cc = CutComplex::build(m, {loop});
  auto rs = cc.regions({0});
  REQUIRE(rs.regions.size() == 1);
  CHECK(rs.regions[0].area == doctest::Approx(1.0));
  CHECK(!rs.regions[0].is_disk);
  CHECK(rs.regions[0].euler == 0);
  CHECK(rs.regions[0].boundary_loops.size() == 2);
}

TEST_CASE("winding numbers of a face boundary") {
  auto m = sample_square(10.0);
  // A small square loop around the point (5, 2) inside face 0.
  auto p = [&](double x, double y) {
    // Face 0 = (0,0),(10,0),(10,10): bary from coordinates.
    double b1 = (x - y) / 10, b2 = y / 10;
    return make_point(m, 0, {1 - b1 - b2, b1, b2});
  };
  std::vector<SurfacePoint> sq{p(4, 1), p(6, 1), p(6, 3), p(4, 3), p(4, 1)};
  SurfaceCurve loop(m, sq, {0, 0, 0, 0});
  auto cc = CutComplex::build(m, {loop});
  std::vector<int> all;
  for (int t = 0; t < cc.tri_count(); t++) all.push_back(t);

  CHECK(cc.winding_number(0, p(5, 2), all) == 1);
  CHECK(cc.winding_number(0, p(1, 0.5), all) == 0);
  CHECK_THROWS_AS(cc.winding_number(0, p(4, 2), all), PointOnCurve);

  // Doubling the loop doubles the winding number; reversing negates it.
  std::vector<SurfacePoint> sq2 = sq;
  sq2.insert(sq2.end(), sq.begin() + 1, sq.end());
  SurfaceCurve loop2(m, sq2, {0, 0, 0, 0, 0, 0, 0, 0});
  auto cc2 = CutComplex::build(m, {loop2, loop.reversed()});
  std::vector<int> all2;
  for (int t = 0; t < cc2.tri_count(); t++) all2.push_back(t);
  CHECK(cc2.winding_number(0, p(5, 2), all2) == 2);
  CHECK(cc2.winding_number(1, p(5, 2), all2) == -1);
}

TEST_CASE("closed loop inside one face leaves a disk-with-hole region") {
  auto m = sample_square(10.0);
  auto p = [&](double x, double y) {
    double b1 = (x - y) / 10, b2 = y / 10;
    return make_point(m, 0, {1 - b1 - b2, b1, b2});
  };
  std::vector<SurfacePoint> sq{p(4, 1), p(6, 1), p(6, 3), p(4, 3), p(4, 1)};
  SurfaceCurve loop(m, sq, {0, 0, 0, 0});
  auto cc = CutComplex::build(m, {loop});
  auto rs = cc.regions({0});
  REQUIRE(rs.regions.size() == 2);
  CHECK(rs.regions[0].area == doctest::Approx(100.0 - 4.0));
  CHECK(rs.regions[1].area == doctest::Approx(4.0));
  CHECK(rs.regions[1].is_disk);
  CHECK(!rs.regions[0].is_disk);  // annulus
  CHECK(rs.regions[0].euler == 0);
}

TEST_CASE("random ray graphs conserve area on golden meshes") {
  std::mt19937_64 rng(20240817);
  std::vector<IntrinsicMesh> meshes;
  meshes.push_back(sample_square());
  meshes.push_back(sample_cube());
  meshes.push_back(sample_torus());
  meshes.push_back(sample_pillow());
  for (auto& m : meshes) {
    for (int round = 0; round < 25; round++) {
      std::vector<SurfaceCurve> curves;
      int n = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; i++) {
        int f = static_cast<int>(rng() % m.face_count());
        std::uniform_real_distribution<double> U(0.05, 0.95);
        double a = U(rng), b = U(rng) * (1 - a);
        auto start = make_point(m, f, {a, b, 1 - a - b});
        double ang = U(rng) * 2 * M_PI;
        auto rt = trace_ray(m, start, f, {std::cos(ang), std::sin(ang)}, 0.9);
        if (rt.curve.segment_count() > 0) curves.push_back(rt.curve);
      }
      if (curves.empty()) continue;
      auto cc = CutComplex::build(m, curves);
      std::vector<int> walls;
      for (size_t i = 0; i < curves.size(); i++) walls.push_back(static_cast<int>(i));
      auto rs = cc.regions(walls);
      double total = 0;
      for (auto& r : rs.regions) total += r.area;
      CHECK(total == doctest::Approx(m.total_area()).epsilon(1e-9));
    }
  }
}

TEST_CASE("region mesh extraction round-trips points") {
  auto m = sample_square();
  SurfaceCurve diag(m, {SurfacePoint::vertex(m.corner_vertex(0, 0), 0),
                        SurfacePoint::vertex(m.corner_vertex(0, 2), 2)},
                    {0});
  auto cc = std::make_shared<CutComplex>(CutComplex::build(m, {diag}));
  auto rs = cc->regions({0});
  RegionMesh rm(cc, rs.regions[0].tris);
  CHECK(rm.mesh().face_count() == 1);
  CHECK(rm.mesh().total_area() == doctest::Approx(0.5));
  // Round trip an interior point.
  auto base_pt = make_point(m, cc->tri(rs.regions[0].tris[0]).base_face, {0.5, 0.3, 0.2});
  auto rp = rm.to_region(base_pt);
  auto back = rm.to_base(rp);
  CHECK(same_point(m, base_pt, back, 1e-9));
}
