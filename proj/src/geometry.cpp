#include "capfilm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "capfilm/kernels.hpp"

namespace capfilm::geom {

static_assert(sizeof(Point) == 2 * sizeof(double));
static_assert(std::is_standard_layout_v<Point>);

namespace {

const double* raw(const std::vector<Point>& v) {
  return v.empty() ? nullptr : &v[0].x;
}

// Proper transversal crossing; touching endpoints report false and are left
// to distance-based checks.
bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return (d1 * d2 < 0.0) && (d3 * d4 < 0.0);
}

struct Bbox {
  double xmin, xmax, ymin, ymax;
};

Bbox segment_bbox(Point a, Point b) {
  return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
          std::max(a.y, b.y)};
}

bool bbox_overlap(const Bbox& a, const Bbox& b) {
  return a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax &&
         b.ymin <= a.ymax;
}

std::size_t segment_count(const Polyline& p) {
  if (p.vertices.size() < 2) return 0;
  return p.vertices.size() - (p.closed ? 0 : 1);
}

void segment_at(const Polyline& p, std::size_t i, Point& a, Point& b) {
  a = p.vertices[i];
  b = p.vertices[(i + 1) % p.vertices.size()];
}

bool chain_is_simple(const Polyline& p) {
  const std::size_t m = segment_count(p);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    Point a, b;
    segment_at(p, i, a, b);
    const Bbox bi = segment_bbox(a, b);
    for (std::size_t j = i + 1; j < m; ++j) {
      Point c, d;
      segment_at(p, j, c, d);
      if (!bbox_overlap(bi, segment_bbox(c, d))) continue;
      if (segments_cross(a, b, c, d)) return false;
    }
  }
  return true;
}

}  // namespace

double norm(Point p) { return std::sqrt(p.x * p.x + p.y * p.y); }

double distance(Point a, Point b) { return norm(a - b); }

Point normalized(Point p) {
  const double n = norm(p);
  if (n == 0.0) return {0.0, 0.0};
  return {p.x / n, p.y / n};
}

double polyline_length(const Polyline& p) {
  return kernels::active().chain_length(raw(p.vertices), p.vertices.size(),
                                        p.closed);
}

double signed_area(const Polyline& p) {
  if (!p.closed) throw std::invalid_argument("open chain has no area");
  return 0.5 * kernels::active().shoelace2(raw(p.vertices), p.vertices.size());
}

bool ConvexPolygon::contains(Point p, double tol) const {
  return signed_distance(p) >= -tol;
}

double ConvexPolygon::signed_distance(Point p) const {
  if (vertices.empty()) return -std::numeric_limits<double>::infinity();
  if (degenerate || vertices.size() < 3) {
    Polyline chain{vertices, false};
    return -min_distance(p, chain);
  }
  double worst = std::numeric_limits<double>::infinity();
  bool outside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices[i];
    const Point b = vertices[(i + 1) % n];
    // CCW hull: interior is to the left of each edge.
    const double d = cross(b - a, p - a) / distance(a, b);
    worst = std::min(worst, d);
    if (d < 0.0) outside = true;
  }
  if (!outside) return worst;
  Polyline ring{vertices, true};
  return -min_distance(p, ring);
}

ConvexPolygon convex_hull(const std::vector<Point>& pts, double tol) {
  ConvexPolygon out;
  if (pts.empty()) {
    out.degenerate = true;
    return out;
  }
  std::vector<Point> s = pts;
  std::sort(s.begin(), s.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  s.erase(std::unique(s.begin(), s.end(),
                      [tol](Point a, Point b) { return distance(a, b) <= tol; }),
          s.end());
  if (s.size() <= 2) {
    out.vertices = s;
    out.degenerate = true;
    return out;
  }
  std::vector<Point> hull(2 * s.size());
  std::size_t k = 0;
  for (const Point& p : s) {  // lower
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= tol)
      --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = s.rbegin() + 1; it != s.rend(); ++it) {  // upper
    while (k >= lower &&
           cross(hull[k - 1] - hull[k - 2], *it - hull[k - 2]) <= tol)
      --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  out.vertices = std::move(hull);
  if (out.vertices.size() < 3) out.degenerate = true;
  return out;
}

ScalarField fit_curvature(const Polyline& p, std::size_t window) {
  const std::size_t n = p.vertices.size();
  if (window < 1) throw std::invalid_argument("fit_curvature: window must be >= 1");
  if (n < 2 * window + 1)
    throw std::invalid_argument("fit_curvature: chain too short for window");
  ScalarField kappa(n, 0.0);
  auto menger = [&](std::size_t ia, std::size_t ib, std::size_t ic) {
    const Point a = p.vertices[ia];
    const Point b = p.vertices[ib];
    const Point c = p.vertices[ic];
    const double denom = distance(a, b) * distance(b, c) * distance(a, c);
    if (denom == 0.0) return 0.0;
    return 2.0 * cross(b - a, c - b) / denom;
  };
  if (p.closed) {
    for (std::size_t i = 0; i < n; ++i) {
      kappa[i] = menger((i + n - window) % n, i, (i + window) % n);
    }
  } else {
    for (std::size_t i = window; i + window < n; ++i) {
      kappa[i] = menger(i - window, i, i + window);
    }
    for (std::size_t i = 0; i < window; ++i) kappa[i] = kappa[window];
    for (std::size_t i = n - window; i < n; ++i) kappa[i] = kappa[n - window - 1];
  }
  return kappa;
}

Polyline normal_offset(const Polyline& p, const ScalarField& u, int side) {
  const std::size_t n = p.vertices.size();
  if (u.size() != n)
    throw std::invalid_argument("normal_offset: field length mismatch");
  if (side != 1 && side != -1)
    throw std::invalid_argument("normal_offset: side must be +1 or -1");
  if (n < 2) throw std::invalid_argument("normal_offset: chain too short");

  const std::size_t nseg = segment_count(p);
  std::vector<Point> edge_normal(nseg);
  for (std::size_t i = 0; i < nseg; ++i) {
    Point a, b;
    segment_at(p, i, a, b);
    edge_normal[i] = right_normal(normalized(b - a));
  }

  Polyline out;
  out.closed = p.closed;
  out.vertices.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point nrm;
    if (p.closed) {
      const Point prev = edge_normal[(i + nseg - 1) % nseg];
      const Point next = edge_normal[i % nseg];
      nrm = normalized(prev + next);
      if (norm(nrm) == 0.0) nrm = next;
    } else if (i == 0) {
      nrm = edge_normal.front();
    } else if (i == n - 1) {
      nrm = edge_normal.back();
    } else {
      nrm = normalized(edge_normal[i - 1] + edge_normal[i]);
      if (norm(nrm) == 0.0) nrm = edge_normal[i];
    }
    out.vertices[i] = p.vertices[i] + (side * u[i]) * nrm;
  }

  // A fold or a full inversion reverses segment directions without
  // necessarily making the chain cross itself.
  for (std::size_t i = 0; i < nseg; ++i) {
    Point a, b, c, d;
    segment_at(p, i, a, b);
    segment_at(out, i, c, d);
    if (norm(b - a) > 0.0 && dot(b - a, d - c) <= 0.0)
      throw std::runtime_error("offset not embedded");
  }
  if (!chain_is_simple(out)) throw std::runtime_error("offset not embedded");
  return out;
}

bool chains_cross(const Polyline& p, const Polyline& q, double) {
  const std::size_t mp = segment_count(p);
  const std::size_t mq = segment_count(q);
  for (std::size_t i = 0; i < mp; ++i) {
    Point a, b;
    segment_at(p, i, a, b);
    const Bbox bi = segment_bbox(a, b);
    for (std::size_t j = 0; j < mq; ++j) {
      Point c, d;
      segment_at(q, j, c, d);
      if (!bbox_overlap(bi, segment_bbox(c, d))) continue;
      if (segments_cross(a, b, c, d)) return true;
    }
  }
  return false;
}

double min_distance(Point p, const Polyline& q) {
  return std::sqrt(kernels::active().min_sqdist_point_chain(
      p.x, p.y, raw(q.vertices), q.vertices.size(), q.closed));
}

double min_distance(const Polyline& p, const Polyline& q) {
  if (p.vertices.empty() || q.vertices.empty())
    return std::numeric_limits<double>::infinity();
  if (chains_cross(p, q)) return 0.0;
  // Minimum over vertex-to-chain distances; exact for non-crossing chains
  // since the closest pair involves a vertex of one side.
  const auto& ops = kernels::active();
  double best = std::numeric_limits<double>::infinity();
  for (const Point& v : p.vertices) {
    best = std::min(best, ops.min_sqdist_point_chain(
                              v.x, v.y, raw(q.vertices), q.vertices.size(),
                              q.closed));
  }
  for (const Point& v : q.vertices) {
    best = std::min(best, ops.min_sqdist_point_chain(
                              v.x, v.y, raw(p.vertices), p.vertices.size(),
                              p.closed));
  }
  return std::sqrt(best);
}

Polyline resample(const Polyline& p, double spacing) {
  if (spacing <= 0.0) throw std::invalid_argument("resample: spacing must be > 0");
  const std::size_t n = p.vertices.size();
  if (n < 2) return p;
  const double len = polyline_length(p);
  if (len == 0.0) return p;

  std::vector<double> cum(n + 1, 0.0);
  const std::size_t nseg = segment_count(p);
  for (std::size_t i = 0; i < nseg; ++i) {
    Point a, b;
    segment_at(p, i, a, b);
    cum[i + 1] = cum[i] + distance(a, b);
  }
  auto at_arclength = [&](double s) {
    const auto it = std::upper_bound(cum.begin(), cum.begin() + nseg + 1, s);
    std::size_t i = (it == cum.begin()) ? 0 : (it - cum.begin() - 1);
    i = std::min(i, nseg - 1);
    Point a, b;
    segment_at(p, i, a, b);
    const double seg = cum[i + 1] - cum[i];
    const double t = seg > 0.0 ? std::clamp((s - cum[i]) / seg, 0.0, 1.0) : 0.0;
    return a + t * (b - a);
  };

  Polyline out;
  out.closed = p.closed;
  if (p.closed) {
    const std::size_t m = std::max<std::size_t>(3, std::llround(len / spacing));
    out.vertices.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      out.vertices.push_back(at_arclength(len * double(k) / double(m)));
    }
    out.vertices.front() = p.vertices.front();
  } else {
    const std::size_t m =
        std::max<std::size_t>(2, std::llround(len / spacing) + 1);
    out.vertices.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      out.vertices.push_back(at_arclength(len * double(k) / double(m - 1)));
    }
    out.vertices.front() = p.vertices.front();
    out.vertices.back() = p.vertices.back();
  }
  return out;
}

}  // namespace capfilm::geom
