#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "capfilm/spanning.hpp"

using namespace capfilm;
using geom::Point;
using geom::Polyline;

namespace {

film::WireFrame two_disks() {
  film::WireFrame w;
  w.disks = {{{-0.6, 0.0}, 0.1}, {{0.6, 0.0}, 0.1}};
  return w;
}

film::WireFrame three_disks() {
  film::WireFrame w;
  w.disks = {{{0.0, 0.0}, 0.05},
             {{1.0, 0.0}, 0.05},
             {{0.5, std::sqrt(3.0) / 2.0}, 0.05}};
  return w;
}

Polyline circle_loop(Point c, double r, int n, bool ccw = true) {
  Polyline p;
  p.closed = true;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(ccw ? k : -k) / double(n);
    p.vertices.push_back(c + Point{r * std::cos(th), r * std::sin(th)});
  }
  return p;
}

Polyline segment_chain(Point a, Point b, int n = 16) {
  Polyline p;
  for (int i = 0; i <= n; ++i)
    p.vertices.push_back(a + (double(i) / double(n)) * (b - a));
  return p;
}

}  // namespace

TEST_CASE("winding numbers by signed angle") {
  const film::WireFrame w = two_disks();
  CHECK(span::winding_vector(circle_loop({-0.6, 0}, 0.3, 64), w) ==
        std::vector<int>{1, 0});
  CHECK(span::winding_vector(circle_loop({-0.6, 0}, 0.3, 64, false), w) ==
        std::vector<int>{-1, 0});
  CHECK(span::winding_vector(circle_loop({0.0, 1.5}, 0.2, 64), w) ==
        std::vector<int>{0, 0});
  CHECK(span::winding_vector(circle_loop({0.0, 0.0}, 1.2, 256), w) ==
        std::vector<int>{1, 1});

  // Figure eight: two lobes meeting at the origin, counterclockwise around
  // the left disk and clockwise around the right one.
  Polyline eight;
  eight.closed = true;
  for (int k = 0; k < 64; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / 64.0;
    eight.vertices.push_back(Point{-0.45, 0} +
                             Point{0.45 * std::cos(th), 0.45 * std::sin(th)});
  }
  for (int k = 0; k < 64; ++k) {
    const double th = std::numbers::pi * (1.0 - 2.0 * double(k) / 64.0);
    eight.vertices.push_back(Point{0.45, 0} +
                             Point{0.45 * std::cos(th), 0.45 * std::sin(th)});
  }
  CHECK(span::winding_vector(eight, w) == std::vector<int>{1, -1});
}

TEST_CASE("an empty network does not span and yields a valid witness") {
  const film::WireFrame w = two_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0}};
  const auto cert = span::is_spanning({}, w, spec, 0.02);
  CHECK_FALSE(cert.spanning);
  REQUIRE(cert.witness.vertices.size() >= 3);
  CHECK(cert.witness.closed);
  CHECK(cert.witness_class == std::vector<int>{1, 0});
  CHECK(span::winding_vector(cert.witness, w) == cert.witness_class);
  for (const Point& p : cert.witness.vertices) {
    for (const film::Disk& d : w.disks)
      CHECK(geom::distance(p, d.center) > d.radius);
  }
}

TEST_CASE("a joining segment spans and a gapped one does not") {
  const film::WireFrame w = two_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0}};

  const Polyline full = segment_chain({-0.5, 0}, {0.5, 0});
  CHECK(span::is_spanning({full}, w, spec, 0.02).spanning);

  const Polyline left = segment_chain({-0.5, 0}, {-0.2, 0});
  const Polyline right = segment_chain({0.2, 0}, {0.5, 0});
  const auto cert = span::is_spanning({left, right}, w, spec, 0.02);
  CHECK_FALSE(cert.spanning);
  CHECK(span::winding_vector(cert.witness, w) == cert.witness_class);
}

TEST_CASE("adding chains never destroys spanning") {
  const film::WireFrame w = two_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0}};
  std::vector<Polyline> net = {segment_chain({-0.5, 0}, {0.5, 0})};
  REQUIRE(span::is_spanning(net, w, spec, 0.02).spanning);
  net.push_back(segment_chain({-0.3, 0.2}, {0.3, 0.2}));
  net.push_back(circle_loop({0, 0.5}, 0.1, 32));
  CHECK(span::is_spanning(net, w, spec, 0.02).spanning);
}

TEST_CASE("verdicts are stable under grid refinement") {
  const film::WireFrame w = two_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0}};
  const std::vector<std::vector<Polyline>> nets = {
      {},
      {segment_chain({-0.5, 0}, {0.5, 0})},
      {segment_chain({-0.5, 0}, {0.0, 0.3}), segment_chain({0.0, 0.3}, {0.5, 0})},
      {segment_chain({-0.5, 0}, {-0.1, 0})},
  };
  for (const auto& net : nets) {
    const bool coarse = span::is_spanning(net, w, spec, 0.02).spanning;
    const bool fine = span::is_spanning(net, w, spec, 0.01).spanning;
    CHECK(coarse == fine);
  }
}

TEST_CASE("too coarse a grid is rejected") {
  const film::WireFrame w = two_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0}};
  CHECK_THROWS_WITH_AS(span::is_spanning({}, w, spec, 0.06),
                       "resolution too coarse", std::runtime_error);
}

TEST_CASE("two-disk baseline is the straight gap segment") {
  const film::WireFrame w = two_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0}, {0, 1}};
  const span::SteinerResult res = span::steiner_baseline(w, spec);
  CHECK(res.length == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(res.network.edges.size() == 1);
  const auto cert =
      span::is_spanning(span::film_chains(res.network), w, spec,
                        span::default_resolution(w));
  CHECK(cert.spanning);
}

TEST_CASE("three-disk baseline is the steiner star") {
  const film::WireFrame w = three_disks();
  span::SpanningSpec spec;
  spec.classes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const span::SteinerResult res = span::steiner_baseline(w, spec);
  CHECK(res.length == doctest::Approx(std::sqrt(3.0) - 0.15).epsilon(1e-6));

  // Hub angles of the star are 120 degrees.
  REQUIRE(res.network.edges.size() == 3);
  int hub = -1;
  for (std::size_t v = 0; v < res.network.vertices.size(); ++v) {
    int deg = 0;
    for (const film::FilmEdge& e : res.network.edges)
      deg += int(e.v0 == int(v)) + int(e.v1 == int(v));
    if (deg == 3) hub = int(v);
  }
  REQUIRE(hub >= 0);
  std::vector<Point> dirs;
  const Point hp = res.network.vertices[std::size_t(hub)].position;
  for (const film::FilmEdge& e : res.network.edges) {
    const auto& chain = e.chain;
    const Point away = e.v0 == hub ? chain[1] - chain[0]
                                   : chain[chain.size() - 2] - chain.back();
    dirs.push_back(geom::normalized(away));
    CHECK(geom::distance(hp, e.v0 == hub ? chain.front() : chain.back()) <
          1e-12);
  }
  for (int i = 0; i < 3; ++i) {
    const double c = geom::dot(dirs[std::size_t(i)], dirs[std::size_t((i + 1) % 3)]);
    const double angle = std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 /
                         std::numbers::pi;
    CHECK(angle == doctest::Approx(120.0).epsilon(0.5 / 120.0));
  }
}

TEST_CASE("a single enclosing class admits no finite barrier") {
  film::WireFrame w;
  w.disks = {{{0.0, 0.0}, 0.1}};
  span::SpanningSpec spec;
  spec.classes = {{1}};
  CHECK_THROWS_WITH_AS(span::steiner_baseline(w, spec),
                       "no spanning topology found", std::runtime_error);
}
