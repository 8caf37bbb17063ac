#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "capfilm/geometry.hpp"

using namespace capfilm;
using geom::Point;
using geom::Polyline;

namespace {

Polyline make_circle(Point c, double r, int n, bool ccw = true) {
  Polyline p;
  p.closed = true;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(ccw ? k : -k) / double(n);
    p.vertices.push_back(c + Point{r * std::cos(th), r * std::sin(th)});
  }
  return p;
}

}  // namespace

TEST_CASE("perimeter and area of a fine polygon approach the circle") {
  const Polyline c = make_circle({0.3, -0.2}, 2.0, 256);
  CHECK(geom::polyline_length(c) ==
        doctest::Approx(2.0 * std::numbers::pi * 2.0).epsilon(1e-3));
  CHECK(geom::signed_area(c) ==
        doctest::Approx(std::numbers::pi * 4.0).epsilon(1e-3));
  CHECK(geom::signed_area(make_circle({0, 0}, 1.0, 64, false)) < 0.0);
}

TEST_CASE("signed area rejects open chains") {
  Polyline p;
  p.vertices = {{0, 0}, {1, 0}, {1, 1}};
  CHECK_THROWS_WITH_AS(geom::signed_area(p), "open chain has no area",
                       std::invalid_argument);
}

TEST_CASE("curvature of sampled circles is the inverse radius with sign") {
  for (const double r : {0.5, 1.0, 3.0}) {
    const Polyline ccw = make_circle({1, 1}, r, 128);
    for (const double k : geom::fit_curvature(ccw, 2))
      CHECK(k == doctest::Approx(1.0 / r).epsilon(1e-9));
    const Polyline cw = make_circle({1, 1}, r, 128, false);
    for (const double k : geom::fit_curvature(cw, 2))
      CHECK(k == doctest::Approx(-1.0 / r).epsilon(1e-9));
  }
}

TEST_CASE("curvature changes sign along an s-curve") {
  Polyline s;
  for (int i = 0; i <= 200; ++i) {
    const double x = 2.0 * std::numbers::pi * double(i) / 200.0;
    s.vertices.push_back({x, std::sin(x)});
  }
  const geom::ScalarField k = geom::fit_curvature(s, 1);
  CHECK(k[50] < -0.1);   // near x = pi/2, bending down
  CHECK(k[150] > 0.1);   // near x = 3pi/2, bending up
}

TEST_CASE("normal offset of a straight chain is a parallel line") {
  Polyline base;
  for (int i = 0; i <= 10; ++i) base.vertices.push_back({double(i) / 10.0, 0.0});
  const geom::ScalarField u(base.vertices.size(), 0.1);
  const Polyline right = geom::normal_offset(base, u, +1);
  const Polyline left = geom::normal_offset(base, u, -1);
  for (std::size_t i = 0; i < base.vertices.size(); ++i) {
    CHECK(right.vertices[i].x == doctest::Approx(base.vertices[i].x));
    CHECK(right.vertices[i].y == doctest::Approx(-0.1));
    CHECK(left.vertices[i].y == doctest::Approx(0.1));
  }
}

TEST_CASE("normal offset of a circle scales the radius") {
  const Polyline c = make_circle({0, 0}, 1.0, 96);
  const geom::ScalarField u(c.vertices.size(), 0.25);
  const Polyline out = geom::normal_offset(c, u, +1);
  const Polyline in = geom::normal_offset(c, u, -1);
  for (const Point& p : out.vertices)
    CHECK(geom::norm(p) == doctest::Approx(1.25).epsilon(1e-6));
  for (const Point& p : in.vertices)
    CHECK(geom::norm(p) == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("normal offset refuses to cross itself") {
  const Polyline c = make_circle({0, 0}, 1.0, 96);
  const geom::ScalarField u(c.vertices.size(), 1.5);
  CHECK_THROWS_WITH_AS(geom::normal_offset(c, u, -1), "offset not embedded",
                       std::runtime_error);
}

TEST_CASE("distances between chains and points") {
  Polyline a, b;
  a.vertices = {{0, 0}, {1, 0}};
  b.vertices = {{0, 0.3}, {1, 0.3}};
  CHECK(geom::min_distance(a, b) == doctest::Approx(0.3));
  CHECK(geom::min_distance(Point{2, 0}, a) == doctest::Approx(1.0));
  CHECK(geom::min_distance(Point{0.5, -0.4}, a) == doctest::Approx(0.4));

  Polyline x;
  x.vertices = {{0.5, -1}, {0.5, 1}};
  CHECK(geom::min_distance(a, x) == doctest::Approx(0.0));
}

TEST_CASE("chain crossing is strictly transversal") {
  Polyline a, b, c, d;
  a.vertices = {{0, 0}, {1, 0}};
  b.vertices = {{0.5, -1}, {0.5, 1}};
  CHECK(geom::chains_cross(a, b));

  c.vertices = {{0, 0}, {0, 1}};  // shares the endpoint (0,0) with a
  CHECK_FALSE(geom::chains_cross(a, c));

  d.vertices = {{0.5, 0}, {0.5, 1}};  // touches a without crossing
  CHECK_FALSE(geom::chains_cross(a, d));
}

TEST_CASE("convex hull keeps extreme points and flags degeneracy") {
  const std::vector<Point> pts = {{0, 0}, {1, 0}, {1, 1},
                                  {0, 1}, {0.5, 0.5}, {0.2, 0.7}};
  const geom::ConvexPolygon hull = geom::convex_hull(pts);
  CHECK_FALSE(hull.degenerate);
  CHECK(hull.vertices.size() == 4);
  CHECK(hull.contains({0.5, 0.5}));
  CHECK_FALSE(hull.contains({1.5, 0.5}));
  CHECK(hull.signed_distance({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(hull.signed_distance({2.0, 0.5}) == doctest::Approx(-1.0));

  const geom::ConvexPolygon line =
      geom::convex_hull({{0, 0}, {1, 1}, {0.5, 0.5}});
  CHECK(line.degenerate);
  CHECK(line.signed_distance({0.5, 0.5}) == doctest::Approx(0.0));
  CHECK(line.signed_distance({0.0, 1.0}) < 0.0);
}

TEST_CASE("resample keeps endpoints and straight-chain length") {
  Polyline p;
  p.vertices = {{0, 0}, {1, 0}};
  const Polyline r = geom::resample(p, 0.3);
  CHECK(r.vertices.front().x == doctest::Approx(0.0));
  CHECK(r.vertices.back().x == doctest::Approx(1.0));
  CHECK(geom::polyline_length(r) == doctest::Approx(1.0));
  for (std::size_t i = 0; i + 1 < r.vertices.size(); ++i)
    CHECK(geom::distance(r.vertices[i], r.vertices[i + 1]) <= 0.35);
}
