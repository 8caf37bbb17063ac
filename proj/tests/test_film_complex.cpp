#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "capfilm/film_complex.hpp"

using namespace capfilm;
using geom::Point;
using film::FilmComplex;

namespace {

FilmComplex two_disk_frame() {
  FilmComplex f;
  f.wire.disks = {{{-0.6, 0.0}, 0.1}, {{0.6, 0.0}, 0.1}};
  return f;
}

film::FilmVertex anchor(Point p, int disk) {
  film::FilmVertex v;
  v.position = p;
  v.kind = film::VertexKind::anchor;
  v.disk = disk;
  return v;
}

film::FilmVertex junction(Point p) {
  film::FilmVertex v;
  v.position = p;
  return v;
}

// Doubled straight segment joining the two disks of two_disk_frame.
FilmComplex doubled_segment() {
  FilmComplex f = two_disk_frame();
  f.vertices = {anchor({-0.5, 0.0}, 0), anchor({0.5, 0.0}, 1)};
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 1;
  e.multiplicity = 2;
  for (int i = 0; i <= 16; ++i)
    e.chain.push_back({-0.5 + double(i) / 16.0, 0.0});
  f.edges.push_back(e);
  return f;
}

// Circular drop of radius r about c, one self-loop region; the wire disk
// sits far away so the structural rules hold.
FilmComplex circle_film(Point c, double r, int n) {
  FilmComplex f;
  f.wire.disks = {{{c.x + r + 3.0, c.y}, 0.1}};
  std::vector<Point> ring;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / double(n);
    ring.push_back(c + Point{r * std::cos(th), r * std::sin(th)});
  }
  ring.push_back(ring.front());
  f.vertices = {junction(ring.front())};
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 0;
  e.multiplicity = 1;
  e.chain = ring;
  f.edges.push_back(e);
  f.regions.push_back({{{0, true}}});
  return f;
}

}  // namespace

TEST_CASE("doubled segment carries twice its length") {
  const FilmComplex f = doubled_segment();
  CHECK(film::relaxed_energy(f) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(film::validate(f).empty());
  CHECK(film::classify(f) == film::Classification::exteriorly_collapsed);
}

TEST_CASE("fine circular drop matches circle formulas") {
  const FilmComplex f = circle_film({0.2, -0.1}, 1.0, 256);
  CHECK(film::validate(f).empty());
  CHECK(film::relaxed_energy(f) ==
        doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-2));
  CHECK(film::liquid_volume(f) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-2));
  CHECK(film::classify(f) == film::Classification::non_collapsed);
}

TEST_CASE("volume agrees with a monte carlo estimate") {
  const FilmComplex f = circle_film({0.0, 0.0}, 0.8, 128);
  const geom::Polyline poly = film::region_polygon(f, f.regions[0]);
  std::mt19937_64 rng(11);
  const auto u01 = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
  const int n = 100000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    const Point p{-1.0 + 2.0 * u01(), -1.0 + 2.0 * u01()};
    if (film::point_in_polygon(p, poly)) ++inside;
  }
  const double mc = 4.0 * double(inside) / double(n);
  CHECK(film::liquid_volume(f) == doctest::Approx(mc).epsilon(1e-2));
}

TEST_CASE("volume adds over disjoint regions") {
  FilmComplex f = circle_film({0.0, 0.0}, 0.5, 96);
  const FilmComplex g = circle_film({2.0, 0.0}, 0.3, 96);
  const int base_vertex = int(f.vertices.size());
  f.vertices.push_back(g.vertices[0]);
  film::FilmEdge e = g.edges[0];
  e.v0 = e.v1 = base_vertex;
  f.edges.push_back(e);
  f.regions.push_back({{{1, true}}});
  CHECK(film::liquid_volume(f) ==
        doctest::Approx(film::liquid_volume(circle_film({0, 0}, 0.5, 96)) +
                        film::liquid_volume(circle_film({2, 0}, 0.3, 96)))
            .epsilon(1e-12));
}

TEST_CASE("flat region loops are rejected") {
  FilmComplex f = two_disk_frame();
  f.vertices = {anchor({-0.5, 0.0}, 0), anchor({0.5, 0.0}, 1)};
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 1;
  e.multiplicity = 1;
  e.chain = {{-0.5, 0.0}, {0.5, 0.0}};
  f.edges.push_back(e);
  f.regions.push_back({{{0, true}, {0, false}}});
  CHECK_THROWS_AS(film::liquid_volume(f), std::runtime_error);
}

TEST_CASE("validation flags doubled region boundaries") {
  FilmComplex f = circle_film({0, 0}, 1.0, 64);
  f.edges[0].multiplicity = 2;
  bool found = false;
  for (const film::Violation& v : film::validate(f))
    found = found || v.code == "θ=1 required on ∂*E";
  CHECK(found);
}

TEST_CASE("validation flags chains inside the wire") {
  FilmComplex f = doubled_segment();
  f.wire.disks.push_back({{0.0, 0.0}, 0.05});
  bool found = false;
  for (const film::Violation& v : film::validate(f))
    found = found || v.code == "K must lie in Ω";
  CHECK(found);
}

TEST_CASE("validation flags clockwise region loops") {
  FilmComplex f = circle_film({0, 0}, 1.0, 64);
  std::reverse(f.edges[0].chain.begin(), f.edges[0].chain.end());
  bool found = false;
  for (const film::Violation& v : film::validate(f))
    found = found || v.code == "region loop not CCW";
  CHECK(found);
}

TEST_CASE("a doubled chord inside a drop is collapsed, a spur is not") {
  FilmComplex f = circle_film({0, 0}, 1.0, 128);
  const int hub = int(f.vertices.size());
  f.vertices.push_back(junction({0.0, 0.0}));
  const int rim = int(f.vertices.size());
  f.vertices.push_back(junction(f.edges[0].chain.front()));
  film::FilmEdge spoke;
  spoke.v0 = rim;
  spoke.v1 = hub;
  spoke.multiplicity = 2;
  for (int i = 0; i <= 8; ++i)
    spoke.chain.push_back({1.0 - double(i) / 8.0, 0.0});
  f.edges.push_back(spoke);
  CHECK(film::classify(f) == film::Classification::collapsed);

  // Move the doubled edge outside the drop: now some of it is far from
  // every region closure.
  FilmComplex g = circle_film({0, 0}, 1.0, 128);
  const int a = int(g.vertices.size());
  g.vertices.push_back(junction(g.edges[0].chain.front()));
  const int b = int(g.vertices.size());
  g.vertices.push_back(junction({1.8, 0.0}));
  film::FilmEdge spur;
  spur.v0 = a;
  spur.v1 = b;
  spur.multiplicity = 2;
  for (int i = 0; i <= 8; ++i)
    spur.chain.push_back({1.0 + 0.8 * double(i) / 8.0, 0.0});
  g.edges.push_back(spur);
  CHECK(film::classify(g) == film::Classification::exteriorly_collapsed);
}

TEST_CASE("classification names") {
  CHECK(std::string(film::to_string(film::Classification::non_collapsed)) ==
        "non_collapsed");
  CHECK(std::string(film::to_string(film::Classification::collapsed)) ==
        "collapsed");
  CHECK(std::string(film::to_string(
            film::Classification::exteriorly_collapsed)) ==
        "exteriorly_collapsed");
}

TEST_CASE("bounds cover wire and chains") {
  const FilmComplex f = doubled_segment();
  const film::Bounds bb = film::film_bounds(f);
  CHECK(bb.lo.x == doctest::Approx(-0.7));
  CHECK(bb.hi.x == doctest::Approx(0.7));
  CHECK(film::frame_diameter(f.wire) == doctest::Approx(1.4).epsilon(1e-9));
}
