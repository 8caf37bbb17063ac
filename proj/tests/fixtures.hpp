#pragma once

// Hand-built films at exact analytic equilibria, with adjustable chain
// density.  Built here from first principles so library generators and
// solvers can be checked against them independently.

#include <cmath>
#include <numbers>
#include <vector>

#include "capfilm/film_complex.hpp"
#include "capfilm/geometry.hpp"

namespace fixtures {

using capfilm::geom::Point;
namespace film = capfilm::film;

inline film::FilmVertex free_vertex(Point p) {
  film::FilmVertex v;
  v.position = p;
  v.kind = film::VertexKind::free_junction;
  return v;
}

inline film::FilmVertex anchor_vertex(Point p, int disk) {
  film::FilmVertex v;
  v.position = p;
  v.kind = film::VertexKind::anchor;
  v.disk = disk;
  return v;
}

// Round liquid drop of radius 1/2 (boundary curvature exactly 2) next to a
// single wire disk, as a closed n-gon inscribed in the circle.
inline film::FilmComplex round_drop(int n) {
  film::FilmComplex f;
  f.wire.disks = {{{0.0, 0.0}, 0.5}};
  const Point c{1.5, 0.0};
  const double r = 0.5;
  std::vector<Point> chain;
  chain.reserve(std::size_t(n) + 1);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / double(n);
    chain.push_back(c + Point{r * std::cos(th), r * std::sin(th)});
  }
  chain.push_back(chain.front());
  f.vertices.push_back(free_vertex(chain.front()));
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 0;
  e.multiplicity = 1;
  e.chain = std::move(chain);
  f.edges.push_back(std::move(e));
  f.regions.push_back({{{0, true}}});
  return f;
}

// Equilateral three-disk frame with a curved liquid triangle at the
// centroid and straight doubled spokes out to the disks.  The three
// boundary arcs (radius sqrt(3)*a, a = junction distance from the
// centroid) meet the spokes tangentially, so tensions balance exactly and
// the configuration is stationary with multiplier -1/(sqrt(3)*a).
// liquid area = a^2 * (3*sqrt(3) - 3*pi/2).
inline film::FilmComplex tangent_star(double a, int arc_n, int spoke_n) {
  film::FilmComplex f;
  const double s3 = std::sqrt(3.0);
  const Point centers[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.5, s3 / 2.0}};
  const double rw = 0.05;
  for (const Point& c : centers) f.wire.disks.push_back({c, rw});
  const Point o{0.5, s3 / 6.0};

  Point dir[3];
  Point junc[3];
  for (int i = 0; i < 3; ++i) {
    dir[i] = capfilm::geom::normalized(centers[i] - o);
    junc[i] = o + a * dir[i];
    f.vertices.push_back(free_vertex(junc[i]));
  }
  for (int i = 0; i < 3; ++i) {
    const Point anchor = centers[i] - rw * dir[i];
    f.vertices.push_back(anchor_vertex(anchor, i));
  }

  // Arcs junc[i] -> junc[i+1]; dir[i] + dir[i+1] is a unit vector because
  // the spoke directions are 120 degrees apart.
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const Point center = o + 2.0 * a * (dir[i] + dir[j]);
    const double rad = s3 * a;
    const double t0 = std::atan2(junc[i].y - center.y, junc[i].x - center.x);
    double t1 = std::atan2(junc[j].y - center.y, junc[j].x - center.x);
    double sweep = t1 - t0;
    while (sweep > std::numbers::pi) sweep -= 2.0 * std::numbers::pi;
    while (sweep < -std::numbers::pi) sweep += 2.0 * std::numbers::pi;
    std::vector<Point> chain;
    chain.reserve(std::size_t(arc_n) + 1);
    chain.push_back(junc[i]);
    for (int k = 1; k < arc_n; ++k) {
      const double th = t0 + sweep * double(k) / double(arc_n);
      chain.push_back(center + Point{rad * std::cos(th), rad * std::sin(th)});
    }
    chain.push_back(junc[j]);
    film::FilmEdge e;
    e.v0 = i;
    e.v1 = j;
    e.multiplicity = 1;
    e.chain = std::move(chain);
    f.edges.push_back(std::move(e));
  }

  // Straight doubled spokes junc[i] -> anchor[i].
  for (int i = 0; i < 3; ++i) {
    const Point from = junc[i];
    const Point to = f.vertices[std::size_t(3 + i)].position;
    std::vector<Point> chain;
    chain.reserve(std::size_t(spoke_n) + 1);
    for (int k = 0; k <= spoke_n; ++k)
      chain.push_back(from +
                      (double(k) / double(spoke_n)) * (to - from));
    film::FilmEdge e;
    e.v0 = i;
    e.v1 = 3 + i;
    e.multiplicity = 2;
    e.chain = std::move(chain);
    f.edges.push_back(std::move(e));
  }

  f.regions.push_back({{{0, true}, {1, true}, {2, true}}});
  return f;
}

inline double star_area_unit() {
  return 3.0 * std::sqrt(3.0) - 1.5 * std::numbers::pi;
}

inline double star_radius_for_area(double epsilon) {
  return std::sqrt(epsilon / star_area_unit());
}

inline double star_lambda(double a) { return -1.0 / (std::sqrt(3.0) * a); }

}  // namespace fixtures
