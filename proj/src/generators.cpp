#include "capfilm/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace capfilm::gen {

using geom::Point;
using film::Disk;
using film::FilmComplex;
using film::FilmEdge;
using film::FilmVertex;
using film::WireFrame;

namespace {

constexpr double kPi = std::numbers::pi;

// Root of a strictly increasing function on [lo, hi].
double bisect_increasing(double lo, double hi, double target,
                         const auto& value) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<Point> straight_chain(Point a, Point b, int k) {
  std::vector<Point> pts;
  pts.reserve(std::size_t(k));
  for (int i = 0; i < k; ++i) {
    const double t = double(i) / double(k - 1);
    pts.push_back(a + t * (b - a));
  }
  pts.front() = a;
  pts.back() = b;
  return pts;
}

FilmVertex anchor_vertex(Point p, int disk) {
  FilmVertex v;
  v.position = p;
  v.kind = film::VertexKind::anchor;
  v.disk = disk;
  return v;
}

FilmVertex junction_vertex(Point p) {
  FilmVertex v;
  v.position = p;
  v.kind = film::VertexKind::free_junction;
  return v;
}

FilmEdge make_edge(int v0, int v1, int mult, std::vector<Point> chain) {
  FilmEdge e;
  e.v0 = v0;
  e.v1 = v1;
  e.multiplicity = mult;
  e.chain = std::move(chain);
  return e;
}

Point anchor_toward(const Disk& d, Point target) {
  return d.center + d.radius * geom::normalized(target - d.center);
}

// Indices of spokes sorted counterclockwise around c.
std::vector<std::size_t> ccw_order(const std::vector<Point>& dirs) {
  std::vector<std::size_t> idx(dirs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&dirs](std::size_t a, std::size_t b) {
    return std::atan2(dirs[a].y, dirs[a].x) < std::atan2(dirs[b].y, dirs[b].x);
  });
  return idx;
}

// Arc between the two junctions of a spoke pair; its circle is centered on
// the bisector at twice the junction radius, which makes it tangent to both
// spokes. Returns the branch whose midpoint lies nearer c.
std::vector<Point> pair_arc(Point c, double rho, Point di, Point dj, int n) {
  const Point ji = c + rho * di;
  const Point jj = c + rho * dj;
  const Point mhat = geom::normalized(di + dj);
  if (geom::norm(di + dj) < 1e-9)
    throw std::invalid_argument("spokes nearly opposite");
  const Point o = c + 2.0 * rho * mhat;
  const double ra = geom::distance(ji, o);
  const double psi_i = std::atan2(ji.y - o.y, ji.x - o.x);
  const double psi_j = std::atan2(jj.y - o.y, jj.x - o.x);
  double delta = psi_j - psi_i;
  while (delta > kPi) delta -= 2.0 * kPi;
  while (delta <= -kPi) delta += 2.0 * kPi;
  const double alt = delta > 0.0 ? delta - 2.0 * kPi : delta + 2.0 * kPi;

  const auto sample = [&](double sweep) {
    std::vector<Point> pts;
    pts.reserve(std::size_t(n));
    for (int k = 0; k < n; ++k) {
      const double psi = psi_i + sweep * double(k) / double(n - 1);
      pts.push_back(o + Point{ra * std::cos(psi), ra * std::sin(psi)});
    }
    pts.front() = ji;
    pts.back() = jj;
    return pts;
  };
  const auto near = sample(delta);
  const auto far = sample(alt);
  const Point m_near = near[std::size_t(n / 2)];
  const Point m_far = far[std::size_t(n / 2)];
  return geom::distance(m_near, c) <= geom::distance(m_far, c) ? near : far;
}

double loop_area(const std::vector<std::vector<Point>>& arcs) {
  geom::Polyline poly;
  poly.closed = true;
  for (const auto& a : arcs)
    poly.vertices.insert(poly.vertices.end(), a.begin(), a.end() - 1);
  return geom::signed_area(poly);
}

}  // namespace

FilmComplex make_lens(const WireFrame& w, double epsilon) {
  if (w.disks.size() < 2) throw std::invalid_argument("lens needs two disks");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const Disk& d0 = w.disks[0];
  const Disk& d1 = w.disks[1];
  const Point u = geom::normalized(d1.center - d0.center);
  const Point a0 = d0.center + d0.radius * u;
  const Point a1 = d1.center - d1.radius * u;
  const double len = geom::distance(a0, a1);
  if (len <= 0.0) throw std::invalid_argument("disks leave no gap");

  // Half-angle of the two circular segments of combined area epsilon.
  const auto seg_area = [len](double alpha) {
    const double r = len / (2.0 * std::sin(alpha));
    return r * r * (alpha - std::sin(alpha) * std::cos(alpha));
  };
  const double hi = 0.5 * kPi - 1e-4;
  if (seg_area(hi) < 0.5 * epsilon)
    throw std::invalid_argument("epsilon too large for lens");
  const double alpha = bisect_increasing(1e-7, hi, 0.5 * epsilon, seg_area);
  const double r = len / (2.0 * std::sin(alpha));
  const double h = r * std::cos(alpha);

  const Point m = 0.5 * (a0 + a1);
  const Point nh = geom::left_normal(u);
  const int n = 64;
  std::vector<Point> lower, upper;
  lower.reserve(n);
  upper.reserve(n);
  const Point o_low = m + h * nh;
  const Point o_up = m - h * nh;
  for (int k = 0; k < n; ++k) {
    const double phi = -alpha + 2.0 * alpha * double(k) / double(n - 1);
    lower.push_back(o_low + r * std::sin(phi) * u - r * std::cos(phi) * nh);
  }
  for (int k = 0; k < n; ++k) {
    const double phi = alpha - 2.0 * alpha * double(k) / double(n - 1);
    upper.push_back(o_up + r * std::sin(phi) * u + r * std::cos(phi) * nh);
  }
  lower.front() = a0;
  lower.back() = a1;
  upper.front() = a1;
  upper.back() = a0;

  FilmComplex f;
  f.wire = w;
  f.vertices.push_back(anchor_vertex(a0, 0));
  f.vertices.push_back(anchor_vertex(a1, 1));
  f.edges.push_back(make_edge(0, 1, 1, std::move(lower)));
  f.edges.push_back(make_edge(1, 0, 1, std::move(upper)));
  f.regions.push_back({{{0, true}, {1, true}}});
  return f;
}

FilmComplex make_collapsed_y(const WireFrame& w, double epsilon) {
  if (w.disks.size() != 3)
    throw std::invalid_argument("collapsed tube needs three disks");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  Point c{0, 0};
  for (const Disk& d : w.disks) c = c + (1.0 / 3.0) * d.center;

  std::vector<Point> anchors(3), dirs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    anchors[i] = anchor_toward(w.disks[i], c);
    dirs[i] = geom::normalized(anchors[i] - c);
  }
  const auto order = ccw_order(dirs);

  const int n = 48;
  const auto arcs_at = [&](double rho) {
    std::vector<std::vector<Point>> arcs;
    for (std::size_t k = 0; k < 3; ++k) {
      const Point di = dirs[order[k]];
      const Point dj = dirs[order[(k + 1) % 3]];
      arcs.push_back(pair_arc(c, rho, di, dj, n));
    }
    return arcs;
  };
  const double unit_area = loop_area(arcs_at(1.0));
  if (unit_area <= 0.0)
    throw std::runtime_error("collapsed tube construction degenerate");
  const double rho = std::sqrt(epsilon / unit_area);
  double reach = 1e300;
  for (std::size_t i = 0; i < 3; ++i)
    reach = std::min(reach, geom::distance(anchors[i], c));
  if (rho > 0.8 * reach)
    throw std::invalid_argument("epsilon too large for collapsed tube");

  const auto arcs = arcs_at(rho);
  FilmComplex f;
  f.wire = w;
  for (std::size_t k = 0; k < 3; ++k)
    f.vertices.push_back(junction_vertex(c + rho * dirs[order[k]]));
  for (std::size_t k = 0; k < 3; ++k)
    f.vertices.push_back(
        anchor_vertex(anchors[order[k]], int(order[k])));
  for (std::size_t k = 0; k < 3; ++k) {
    auto chain = arcs[k];
    chain.front() = f.vertices[k].position;
    chain.back() = f.vertices[(k + 1) % 3].position;
    f.edges.push_back(make_edge(int(k), int((k + 1) % 3), 1, std::move(chain)));
  }
  for (std::size_t k = 0; k < 3; ++k)
    f.edges.push_back(make_edge(
        int(k), int(3 + k), 2,
        straight_chain(f.vertices[k].position, f.vertices[3 + k].position, 8)));
  f.regions.push_back({{{0, true}, {1, true}, {2, true}}});
  return f;
}

FilmComplex make_inflated_y(const WireFrame& w, double epsilon) {
  if (w.disks.size() != 3)
    throw std::invalid_argument("tube needs three disks");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  Point c{0, 0};
  for (const Disk& d : w.disks) c = c + (1.0 / 3.0) * d.center;

  std::vector<Point> anchors(3), dirs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    anchors[i] = anchor_toward(w.disks[i], c);
    dirs[i] = geom::normalized(anchors[i] - c);
  }
  const auto order = ccw_order(dirs);

  // Corner between consecutive spokes sits on their bisector at the height
  // that keeps both wall legs at distance h from the skeleton.
  const auto corner = [&](std::size_t k, double h) {
    const Point di = dirs[order[k]];
    const Point dj = dirs[order[(k + 1) % 3]];
    const Point sum = di + dj;
    if (geom::norm(sum) < 1e-9)
      throw std::invalid_argument("spokes nearly opposite");
    const double sin_half = std::sqrt(std::max(0.0, 0.5 * (1.0 - geom::dot(di, dj))));
    return c + (h / sin_half) * geom::normalized(sum);
  };
  const auto area_at = [&](double h) {
    geom::Polyline poly;
    poly.closed = true;
    for (std::size_t k = 0; k < 3; ++k) {
      poly.vertices.push_back(anchors[order[k]]);
      poly.vertices.push_back(corner(k, h));
    }
    return geom::signed_area(poly);
  };

  double reach = 1e300;
  for (std::size_t i = 0; i < 3; ++i)
    reach = std::min(reach, geom::distance(anchors[i], c));
  const double h_hi = 0.45 * reach;
  if (area_at(h_hi) < epsilon)
    throw std::invalid_argument("epsilon too large for tube width");
  const double h = bisect_increasing(1e-9 * reach, h_hi, epsilon, area_at);

  FilmComplex f;
  f.wire = w;
  for (std::size_t k = 0; k < 3; ++k)
    f.vertices.push_back(
        anchor_vertex(anchors[order[k]], int(order[k])));
  for (std::size_t k = 0; k < 3; ++k) {
    const Point a = anchors[order[k]];
    const Point b = anchors[order[(k + 1) % 3]];
    const Point q = corner(k, h);
    auto leg1 = straight_chain(a, q, 10);
    const auto leg2 = straight_chain(q, b, 10);
    leg1.insert(leg1.end(), leg2.begin() + 1, leg2.end());
    f.edges.push_back(
        make_edge(int(k), int((k + 1) % 3), 1, std::move(leg1)));
  }
  f.regions.push_back({{{0, true}, {1, true}, {2, true}}});
  return f;
}

namespace {

Point drop_center(const WireFrame& w, double radius) {
  const Disk& d = w.disks.front();
  if (radius > 1.5 * d.radius) return d.center;
  return d.center + Point{2.0 * (d.radius + radius), 0.0};
}

std::vector<Point> circle_chain(Point c, double r, int n) {
  std::vector<Point> pts;
  pts.reserve(std::size_t(n) + 1);
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * kPi * double(k) / double(n);
    pts.push_back(c + Point{r * std::cos(th), r * std::sin(th)});
  }
  pts.push_back(pts.front());
  return pts;
}

}  // namespace

FilmComplex make_drop(const WireFrame& w, double epsilon) {
  if (w.disks.empty()) throw std::invalid_argument("wireframe empty");
  if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  const double r = std::sqrt(epsilon / kPi);
  const Point c = drop_center(w, r);
  auto chain = circle_chain(c, r, 128);

  FilmComplex f;
  f.wire = w;
  f.vertices.push_back(junction_vertex(chain.front()));
  f.edges.push_back(make_edge(0, 0, 1, std::move(chain)));
  f.regions.push_back({{{0, true}}});
  return f;
}

FilmComplex make_drop_with_antenna(const WireFrame& w, double epsilon,
                                   double antenna_length) {
  if (antenna_length <= 0.0)
    throw std::invalid_argument("antenna length must be positive");
  FilmComplex f = make_drop(w, epsilon);
  const double r = std::sqrt(epsilon / kPi);
  const Point j = f.vertices[0].position;
  const Point c = j - Point{r, 0.0};
  const Point tip = c + Point{r + antenna_length, 0.0};
  f.vertices.push_back(junction_vertex(tip));
  f.edges.push_back(make_edge(0, 1, 2, straight_chain(j, tip, 16)));
  return f;
}

}  // namespace capfilm::gen
