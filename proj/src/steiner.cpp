#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "capfilm/spanning.hpp"

namespace capfilm::span {

using geom::Point;
using geom::Polyline;

namespace {

// Geometric median by Weiszfeld iteration; exact enough for candidate
// ranking and 120-degree stars.
Point geometric_median(const std::vector<Point>& pts) {
  Point f{0, 0};
  for (const Point& p : pts) f = f + p;
  f = (1.0 / double(pts.size())) * f;
  for (int it = 0; it < 200; ++it) {
    double wsum = 0.0;
    Point acc{0, 0};
    bool on_point = false;
    for (const Point& p : pts) {
      const double d = geom::distance(f, p);
      if (d < 1e-14) {
        on_point = true;
        break;
      }
      wsum += 1.0 / d;
      acc = acc + (1.0 / d) * p;
    }
    if (on_point || wsum == 0.0) break;
    const Point next = (1.0 / wsum) * acc;
    if (geom::distance(next, f) < 1e-15) {
      f = next;
      break;
    }
    f = next;
  }
  return f;
}

struct Segment {
  Point a, b;
  int disk_a = -1, disk_b = -1;  // anchor disks, -1 for interior points
};

struct Candidate {
  double length = 0.0;
  std::vector<Segment> segments;
};

bool segment_clear_of_disks(const Point& a, const Point& b,
                            const film::WireFrame& wire, int skip_a,
                            int skip_b) {
  Polyline seg{{a, b}, false};
  for (std::size_t i = 0; i < wire.disks.size(); ++i) {
    const double clear =
        geom::min_distance(wire.disks[i].center, seg) - wire.disks[i].radius;
    const bool endpoint_disk = int(i) == skip_a || int(i) == skip_b;
    if (clear < (endpoint_disk ? -1e-9 : 1e-9)) return false;
  }
  return true;
}

Point anchor_toward(const film::Disk& d, Point target) {
  const Point u = geom::normalized(target - d.center);
  return d.center + d.radius * u;
}

// Star component: spokes from a subset of disks to one interior point.
bool make_star(const film::WireFrame& wire, const std::vector<int>& subset,
               std::vector<Segment>& out) {
  std::vector<Point> centers;
  for (int i : subset) centers.push_back(wire.disks[std::size_t(i)].center);
  const Point f = geometric_median(centers);
  for (const film::Disk& d : wire.disks) {
    if (geom::distance(f, d.center) <= d.radius + 1e-9) return false;
  }
  for (int i : subset) {
    const film::Disk& d = wire.disks[std::size_t(i)];
    const Point a = anchor_toward(d, f);
    if (!segment_clear_of_disks(a, f, wire, i, -1)) return false;
    out.push_back({a, f, i, -1});
  }
  return true;
}

// Two-point Steiner tree for four disks: inner points s1 (serving
// terminals i,j) and s2 (serving k,l), refined by alternating median
// updates.
bool make_tree4(const film::WireFrame& wire, int i, int j, int k, int l,
                std::vector<Segment>& out) {
  const Point ci = wire.disks[std::size_t(i)].center;
  const Point cj = wire.disks[std::size_t(j)].center;
  const Point ck = wire.disks[std::size_t(k)].center;
  const Point cl = wire.disks[std::size_t(l)].center;
  Point s1 = 0.5 * (ci + cj), s2 = 0.5 * (ck + cl);
  for (int it = 0; it < 120; ++it) {
    const Point n1 = geometric_median({ci, cj, s2});
    const Point n2 = geometric_median({ck, cl, n1});
    if (geom::distance(n1, s1) + geom::distance(n2, s2) < 1e-13) {
      s1 = n1;
      s2 = n2;
      break;
    }
    s1 = n1;
    s2 = n2;
  }
  for (const film::Disk& d : wire.disks) {
    if (geom::distance(s1, d.center) <= d.radius + 1e-9) return false;
    if (geom::distance(s2, d.center) <= d.radius + 1e-9) return false;
  }
  const int terms[4] = {i, j, k, l};
  const Point inner[4] = {s1, s1, s2, s2};
  for (int t = 0; t < 4; ++t) {
    const film::Disk& d = wire.disks[std::size_t(terms[t])];
    const Point a = anchor_toward(d, inner[t]);
    if (!segment_clear_of_disks(a, inner[t], wire, terms[t], -1)) return false;
    out.push_back({a, inner[t], terms[t], -1});
  }
  if (geom::distance(s1, s2) > 1e-12) {
    if (!segment_clear_of_disks(s1, s2, wire, -1, -1)) return false;
    out.push_back({s1, s2, -1, -1});
  }
  return true;
}

double total_length(const std::vector<Segment>& segs) {
  double acc = 0.0;
  for (const Segment& s : segs) acc += geom::distance(s.a, s.b);
  return acc;
}

film::FilmComplex build_network(const film::WireFrame& wire,
                                const std::vector<Segment>& segs) {
  film::FilmComplex f;
  f.wire = wire;
  auto find_or_add = [&f](Point p, int disk) {
    for (std::size_t i = 0; i < f.vertices.size(); ++i) {
      if (geom::distance(f.vertices[i].position, p) < 1e-12) return int(i);
    }
    film::FilmVertex v;
    v.position = p;
    v.kind = disk >= 0 ? film::VertexKind::anchor : film::VertexKind::free_junction;
    v.disk = disk;
    f.vertices.push_back(v);
    return int(f.vertices.size()) - 1;
  };
  for (const Segment& s : segs) {
    film::FilmEdge e;
    e.v0 = find_or_add(s.a, s.disk_a);
    e.v1 = find_or_add(s.b, s.disk_b);
    e.multiplicity = 1;
    e.chain = {s.a, s.b};
    f.edges.push_back(e);
  }
  return f;
}

}  // namespace

SteinerResult steiner_baseline(const film::WireFrame& wire,
                               const SpanningSpec& spec) {
  return steiner_baseline(wire, spec, default_resolution(wire));
}

SteinerResult steiner_baseline(const film::WireFrame& wire,
                               const SpanningSpec& spec, double resolution) {
  const int n = int(wire.disks.size());
  if (n < 1) throw std::invalid_argument("wireframe empty");
  if (n > 5) throw std::invalid_argument("baseline enumeration limited to 5 disks");

  std::vector<std::vector<Segment>> pair_segs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const film::Disk& di = wire.disks[std::size_t(i)];
      const film::Disk& dj = wire.disks[std::size_t(j)];
      const Point a = anchor_toward(di, dj.center);
      const Point b = anchor_toward(dj, di.center);
      if (!segment_clear_of_disks(a, b, wire, i, j)) continue;
      pair_segs.push_back({{a, b, i, j}});
    }
  }

  // Optional connected components beyond plain pair segments: one star
  // per disk subset of size >= 3, and the two-inner-point trees when
  // exactly four disks are present.
  std::vector<std::vector<Segment>> extras;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) subset.push_back(i);
    if (subset.size() < 3) continue;
    std::vector<Segment> star;
    if (make_star(wire, subset, star)) extras.push_back(std::move(star));
  }
  if (n == 4) {
    const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& p : pairings) {
      std::vector<Segment> tree;
      if (make_tree4(wire, p[0], p[1], p[2], p[3], tree))
        extras.push_back(std::move(tree));
    }
  }

  std::vector<Candidate> candidates;
  const int pmask_end = 1 << int(pair_segs.size());
  for (int pmask = 0; pmask < pmask_end; ++pmask) {
    std::vector<Segment> base;
    for (std::size_t k = 0; k < pair_segs.size(); ++k)
      if (pmask & (1 << k))
        base.insert(base.end(), pair_segs[k].begin(), pair_segs[k].end());
    candidates.push_back({total_length(base), base});
    for (const auto& extra : extras) {
      std::vector<Segment> both = base;
      both.insert(both.end(), extra.begin(), extra.end());
      candidates.push_back({total_length(both), std::move(both)});
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.length != b.length) return a.length < b.length;
                     return a.segments.size() < b.segments.size();
                   });

  for (const Candidate& c : candidates) {
    std::vector<Polyline> chains;
    chains.reserve(c.segments.size());
    for (const Segment& s : c.segments)
      chains.push_back(Polyline{{s.a, s.b}, false});
    const SpanningCertificate cert = is_spanning(chains, wire, spec, resolution);
    if (cert.spanning) {
      SteinerResult r;
      r.length = c.length;
      r.network = build_network(wire, c.segments);
      return r;
    }
  }
  throw std::runtime_error("no spanning topology found");
}

}  // namespace capfilm::span
