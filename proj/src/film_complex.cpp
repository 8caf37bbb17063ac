#include "capfilm/film_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace capfilm::film {

using geom::Point;
using geom::Polyline;

const char* to_string(Classification c) {
  switch (c) {
    case Classification::non_collapsed: return "non_collapsed";
    case Classification::collapsed: return "collapsed";
    case Classification::exteriorly_collapsed: return "exteriorly_collapsed";
  }
  return "unknown";
}

geom::Polyline edge_polyline(const FilmEdge& e) {
  return Polyline{e.chain, false};
}

double relaxed_energy(const FilmComplex& f) {
  double acc = 0.0;
  for (const FilmEdge& e : f.edges) {
    acc += double(e.multiplicity) * geom::polyline_length(edge_polyline(e));
  }
  return acc;
}

geom::Polyline region_polygon(const FilmComplex& f, const LiquidRegion& r) {
  Polyline poly;
  poly.closed = true;
  for (const OrientedEdge& oe : r.loop) {
    const FilmEdge& e = f.edges.at(oe.edge);
    if (oe.forward) {
      poly.vertices.insert(poly.vertices.end(), e.chain.begin(),
                           e.chain.end() - 1);
    } else {
      poly.vertices.insert(poly.vertices.end(), e.chain.rbegin(),
                           e.chain.rend() - 1);
    }
  }
  return poly;
}

double liquid_volume(const FilmComplex& f) {
  double acc = 0.0;
  for (const LiquidRegion& r : f.regions) {
    const Polyline poly = region_polygon(f, r);
    if (poly.vertices.size() < 3)
      throw std::runtime_error("degenerate region loop");
    const double area = geom::signed_area(poly);
    if (area <= 0.0) throw std::runtime_error("degenerate region loop");
    acc += area;
  }
  return acc;
}

bool point_in_polygon(Point p, const Polyline& poly) {
  const auto& v = poly.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double xc =
          v[j].x + (p.y - v[j].y) / (v[i].y - v[j].y) * (v[i].x - v[j].x);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

double distance_to_region_closure(const FilmComplex& f, const LiquidRegion& r,
                                  Point p) {
  const Polyline poly = region_polygon(f, r);
  if (point_in_polygon(p, poly)) return 0.0;
  return geom::min_distance(p, poly);
}

double distance_to_film(const FilmComplex& f, Point p) {
  double best = std::numeric_limits<double>::infinity();
  for (const FilmEdge& e : f.edges) {
    best = std::min(best, geom::min_distance(p, edge_polyline(e)));
  }
  return best;
}

std::vector<Point> anchor_positions(const FilmComplex& f) {
  std::vector<Point> out;
  for (const FilmVertex& v : f.vertices) {
    if (v.kind == VertexKind::anchor) out.push_back(v.position);
  }
  return out;
}

Bounds film_bounds(const FilmComplex& f) {
  Bounds b{{std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()},
           {-std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()}};
  auto take = [&b](Point p) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  };
  for (const Disk& d : f.wire.disks) {
    take({d.center.x - d.radius, d.center.y - d.radius});
    take({d.center.x + d.radius, d.center.y + d.radius});
  }
  for (const FilmEdge& e : f.edges) {
    for (const Point& p : e.chain) take(p);
  }
  return b;
}

double frame_diameter(const WireFrame& w) {
  double best = 0.0;
  for (std::size_t i = 0; i < w.disks.size(); ++i) {
    for (std::size_t j = 0; j < w.disks.size(); ++j) {
      best = std::max(best, geom::distance(w.disks[i].center,
                                           w.disks[j].center) +
                                w.disks[i].radius + w.disks[j].radius);
    }
  }
  if (w.disks.size() == 1) best = 2.0 * w.disks[0].radius;
  return best;
}

namespace {

double segment_disk_clearance(Point a, Point b, const Disk& d) {
  Polyline seg{{a, b}, false};
  return geom::min_distance(d.center, seg) - d.radius;
}

}  // namespace

std::vector<Violation> validate(const FilmComplex& f, double tol) {
  std::vector<Violation> out;
  auto flag = [&out](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };

  if (f.wire.disks.empty()) flag("wireframe empty", "need at least one disk");
  for (std::size_t i = 0; i < f.wire.disks.size(); ++i) {
    if (f.wire.disks[i].radius <= 0.0)
      flag("disk radius must be positive", "disk " + std::to_string(i));
    for (std::size_t j = i + 1; j < f.wire.disks.size(); ++j) {
      const double gap =
          geom::distance(f.wire.disks[i].center, f.wire.disks[j].center) -
          f.wire.disks[i].radius - f.wire.disks[j].radius;
      if (gap <= 0.0)
        flag("disks must be disjoint",
             "disks " + std::to_string(i) + "," + std::to_string(j));
    }
  }

  for (std::size_t vi = 0; vi < f.vertices.size(); ++vi) {
    const FilmVertex& v = f.vertices[vi];
    if (v.kind == VertexKind::anchor) {
      if (v.disk < 0 || v.disk >= int(f.wire.disks.size())) {
        flag("anchor references missing disk", "vertex " + std::to_string(vi));
        continue;
      }
      const Disk& d = f.wire.disks[v.disk];
      if (std::abs(geom::distance(v.position, d.center) - d.radius) > tol)
        flag("anchor off its circle", "vertex " + std::to_string(vi));
    }
  }

  for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
    const FilmEdge& e = f.edges[ei];
    const std::string tag = "edge " + std::to_string(ei);
    if (e.multiplicity != 1 && e.multiplicity != 2)
      flag("multiplicity must be 1 or 2", tag);
    if (e.chain.size() < 2) {
      flag("degenerate edge chain", tag);
      continue;
    }
    for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
      if (geom::distance(e.chain[i], e.chain[i + 1]) == 0.0) {
        flag("degenerate edge chain", tag + " repeated vertex");
        break;
      }
    }
    if (e.v0 < 0 || e.v0 >= int(f.vertices.size()) || e.v1 < 0 ||
        e.v1 >= int(f.vertices.size())) {
      flag("edge references missing vertex", tag);
      continue;
    }
    if (geom::distance(e.chain.front(), f.vertices[e.v0].position) > tol ||
        geom::distance(e.chain.back(), f.vertices[e.v1].position) > tol)
      flag("edge endpoints detached from vertices", tag);
    for (std::size_t di = 0; di < f.wire.disks.size(); ++di) {
      bool bad = false;
      for (std::size_t i = 0; i + 1 < e.chain.size() && !bad; ++i) {
        if (segment_disk_clearance(e.chain[i], e.chain[i + 1],
                                   f.wire.disks[di]) < -tol)
          bad = true;
      }
      if (bad) flag("K must lie in Ω", tag + " enters disk " + std::to_string(di));
    }
  }

  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    const Polyline pi = edge_polyline(f.edges[i]);
    if (geom::chains_cross(pi, pi))
      flag("edges cross outside shared vertices",
           "edge " + std::to_string(i) + " self-crossing");
    for (std::size_t j = i + 1; j < f.edges.size(); ++j) {
      if (geom::chains_cross(pi, edge_polyline(f.edges[j])))
        flag("edges cross outside shared vertices",
             "edges " + std::to_string(i) + "," + std::to_string(j));
    }
  }

  for (std::size_t ri = 0; ri < f.regions.size(); ++ri) {
    const LiquidRegion& r = f.regions[ri];
    const std::string tag = "region " + std::to_string(ri);
    if (r.loop.empty()) {
      flag("region loop does not close", tag + " empty");
      continue;
    }
    bool refs_ok = true;
    for (const OrientedEdge& oe : r.loop) {
      if (oe.edge < 0 || oe.edge >= int(f.edges.size())) {
        flag("region references missing edge", tag);
        refs_ok = false;
        break;
      }
      if (f.edges[oe.edge].multiplicity != 1)
        flag("θ=1 required on ∂*E",
             tag + " uses mult-2 edge " + std::to_string(oe.edge));
    }
    if (!refs_ok) continue;
    for (std::size_t k = 0; k < r.loop.size(); ++k) {
      const OrientedEdge& cur = r.loop[k];
      const OrientedEdge& nxt = r.loop[(k + 1) % r.loop.size()];
      const FilmEdge& ec = f.edges[cur.edge];
      const FilmEdge& en = f.edges[nxt.edge];
      const int tail = cur.forward ? ec.v1 : ec.v0;
      const int head = nxt.forward ? en.v0 : en.v1;
      if (tail != head) {
        flag("region loop does not close", tag);
        break;
      }
    }
    const Polyline poly = region_polygon(f, r);
    if (poly.vertices.size() < 3) {
      flag("region loop encloses no area", tag);
    } else {
      const double area = geom::signed_area(poly);
      if (area <= 0.0)
        flag(area == 0.0 ? "region loop encloses no area"
                         : "region loop not CCW",
             tag);
    }
  }

  return out;
}

Classification classify(const FilmComplex& f, double tol) {
  bool any_m2 = false;
  bool exterior = false;
  for (const FilmEdge& e : f.edges) {
    if (e.multiplicity != 2) continue;
    any_m2 = true;
    std::vector<Point> samples = e.chain;
    for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
      samples.push_back(0.5 * (e.chain[i] + e.chain[i + 1]));
    }
    for (const Point& p : samples) {
      double d = std::numeric_limits<double>::infinity();
      for (const LiquidRegion& r : f.regions) {
        d = std::min(d, distance_to_region_closure(f, r, p));
      }
      if (d > tol) {
        exterior = true;
        break;
      }
    }
    if (exterior) break;
  }
  if (!any_m2) return Classification::non_collapsed;
  return exterior ? Classification::exteriorly_collapsed
                  : Classification::collapsed;
}

}  // namespace capfilm::film
