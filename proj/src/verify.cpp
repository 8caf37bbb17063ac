#include "capfilm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace capfilm::verify {

using geom::ConvexPolygon;
using geom::Point;
using geom::Polyline;
using film::FilmComplex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Uniform in [0,1) from the top 53 bits, identical on every platform.
double u01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

double dist_to_wire(const film::WireFrame& w, Point p) {
  double best = kInf;
  for (const film::Disk& d : w.disks)
    best = std::min(best, std::max(0.0, geom::distance(p, d.center) - d.radius));
  return best;
}

double smoothstep01(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

struct HullProjection {
  double dist = 0.0;
  Point grad{0.0, 0.0};
  int feature = -1;  // 2i vertex i, 2i+1 edge i, -1 interior
};

HullProjection project_to_hull(const ConvexPolygon& z, Point p) {
  HullProjection best;
  if (!z.degenerate && z.contains(p, 0.0)) return best;
  best.dist = kInf;
  const std::size_t n = z.vertices.size();
  if (n == 1) {
    best.dist = geom::distance(p, z.vertices[0]);
    best.feature = 0;
  } else {
    const std::size_t m = z.degenerate ? n - 1 : n;
    for (std::size_t i = 0; i < m; ++i) {
      const Point a = z.vertices[i];
      const Point b = z.vertices[(i + 1) % n];
      const Point e = b - a;
      const double len2 = geom::dot(e, e);
      double t = len2 > 0.0 ? geom::dot(p - a, e) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double d = geom::distance(p, a + t * e);
      if (d < best.dist) {
        best.dist = d;
        if (t <= 1e-12)
          best.feature = 2 * int(i);
        else if (t >= 1.0 - 1e-12)
          best.feature = 2 * int((i + 1) % n);
        else
          best.feature = 2 * int(i) + 1;
        best.grad = p - (a + t * e);
      }
    }
  }
  if (best.dist > 0.0) best.grad = (1.0 / best.dist) * best.grad;
  return best;
}

double region_flux(const FilmComplex& f,
                   const std::function<Point(Point)>& field,
                   int samples_per_edge) {
  double flux = 0.0;
  for (const film::LiquidRegion& r : f.regions) {
    const Polyline poly = film::region_polygon(f, r);
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = poly.vertices[i];
      const Point b = poly.vertices[(i + 1) % n];
      const double seg_len = geom::distance(a, b);
      if (seg_len <= 0.0) continue;
      const Point nu = geom::right_normal((1.0 / seg_len) * (b - a));
      const double h = seg_len / double(samples_per_edge);
      for (int j = 0; j < samples_per_edge; ++j) {
        const double tm = (double(j) + 0.5) / double(samples_per_edge);
        flux += geom::dot(field(a + tm * (b - a)), nu) * h;
      }
    }
  }
  return flux;
}

}  // namespace

AdmissibleField make_random_field(const film::WireFrame& wire, double gap,
                                  std::uint64_t seed) {
  if (!(gap > 0.0)) throw std::invalid_argument("gap must be positive");
  Point lo{kInf, kInf}, hi{-kInf, -kInf};
  for (const film::Disk& d : wire.disks) {
    lo.x = std::min(lo.x, d.center.x - d.radius);
    lo.y = std::min(lo.y, d.center.y - d.radius);
    hi.x = std::max(hi.x, d.center.x + d.radius);
    hi.y = std::max(hi.y, d.center.y + d.radius);
  }
  if (wire.disks.empty()) {
    lo = {-1.0, -1.0};
    hi = {1.0, 1.0};
  }
  const double diam = std::max(geom::distance(lo, hi), 1e-3);
  const double pad = 0.5 * diam;

  std::mt19937_64 rng(seed);
  struct Bump {
    Point center;
    Point amp;
    double inv_two_sigma2;
  };
  std::vector<Bump> bumps;
  for (int i = 0; i < 6; ++i) {
    Bump b;
    b.center = {lo.x - pad + u01(rng) * (hi.x - lo.x + 2.0 * pad),
                lo.y - pad + u01(rng) * (hi.y - lo.y + 2.0 * pad)};
    const double th = 2.0 * std::numbers::pi * u01(rng);
    const double mag = 0.5 + 0.5 * u01(rng);
    b.amp = {mag * std::cos(th), mag * std::sin(th)};
    const double sigma = (0.15 + 0.35 * u01(rng)) * diam;
    b.inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    bumps.push_back(b);
  }

  const film::WireFrame w = wire;
  AdmissibleField field;
  field.support_gap = gap;
  field.eval = [bumps, w, gap](Point p) -> Point {
    const double dw = dist_to_wire(w, p);
    if (dw <= gap) return {0.0, 0.0};
    const double chi = smoothstep01((dw - gap) / gap);
    Point v{0.0, 0.0};
    for (const Bump& b : bumps) {
      const Point d = p - b.center;
      v = v + std::exp(-geom::dot(d, d) * b.inv_two_sigma2) * b.amp;
    }
    return chi * v;
  };
  return field;
}

double first_variation_residual(const film::FilmComplex& f, double lambda,
                                const AdmissibleField& X,
                                int samples_per_edge) {
  if (samples_per_edge < 1)
    throw std::invalid_argument("samples_per_edge must be at least 1");

  const double gap = std::max(X.support_gap, 0.0);
  for (const film::Disk& d : f.wire.disks) {
    const int radial = gap > 0.0 ? 8 : 0;
    for (int k = 0; k <= radial; ++k) {
      const double rad =
          d.radius + (radial > 0 ? 0.999 * gap * double(k) / double(radial)
                                 : 0.0);
      for (int a = 0; a < 64; ++a) {
        const double th = 2.0 * std::numbers::pi * double(a) / 64.0;
        const Point p = d.center + Point{rad * std::cos(th),
                                         rad * std::sin(th)};
        if (geom::norm(X.eval(p)) > 1e-9)
          throw std::invalid_argument("field fails support condition");
      }
    }
  }

  const double flux = region_flux(f, X.eval, samples_per_edge);

  double tangential = 0.0;
  for (const film::FilmEdge& e : f.edges) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
      const Point a = e.chain[i], b = e.chain[i + 1];
      const double len = geom::distance(a, b);
      if (len <= 0.0) continue;
      acc += geom::dot(X.eval(b) - X.eval(a), (1.0 / len) * (b - a));
    }
    tangential += double(e.multiplicity) * acc;
  }

  return std::abs(lambda * flux - tangential);
}

double first_variation_residual(const film::FilmComplex& f, double lambda,
                                const std::vector<AdmissibleField>& fields,
                                int samples_per_edge) {
  if (fields.empty()) throw std::invalid_argument("fields must be nonempty");
  double worst = 0.0;
  for (const AdmissibleField& X : fields)
    worst = std::max(worst,
                     first_variation_residual(f, lambda, X, samples_per_edge));
  return worst;
}

VerificationReport convex_hull_check(const film::FilmComplex& f,
                                     double lambda) {
  VerificationReport rep;
  rep.check = "convex_hull";
  if (f.wire.disks.empty())
    throw std::invalid_argument("wire frame is empty");

  std::vector<Point> wire_pts;
  for (const film::Disk& d : f.wire.disks) {
    for (int k = 0; k < 256; ++k) {
      const double th = 2.0 * std::numbers::pi * double(k) / 256.0;
      wire_pts.push_back(d.center +
                         Point{d.radius * std::cos(th),
                               d.radius * std::sin(th)});
    }
  }
  const ConvexPolygon wire_hull = geom::convex_hull(wire_pts);
  const std::vector<Point> anchors = film::anchor_positions(f);

  const auto is_anchor_position = [&anchors](Point p) {
    for (const Point& a : anchors)
      if (geom::distance(p, a) <= 1e-12) return true;
    return false;
  };

  std::vector<Point> probes;
  for (const film::FilmEdge& e : f.edges)
    for (const Point& p : e.chain)
      if (!is_anchor_position(p)) probes.push_back(p);
  for (const film::FilmVertex& v : f.vertices)
    if (!is_anchor_position(v.position)) probes.push_back(v.position);

  double wire_margin = kInf;
  for (const Point& p : probes)
    wire_margin = std::min(wire_margin, wire_hull.signed_distance(p));

  std::ostringstream details;
  details << "wire hull margin " << wire_margin;

  if (lambda > 0.0) {
    rep.passed = true;
    rep.margin = wire_margin;
    rep.details = "not applicable (λ>0): hypothesis λ≤0 not met";
    return rep;
  }

  rep.margin = wire_margin;
  rep.passed = wire_margin > 0.0;

  if (lambda < 0.0) {
    const ConvexPolygon anchor_hull = geom::convex_hull(anchors);
    double anchor_margin = kInf;
    for (const Point& p : probes)
      anchor_margin = std::min(anchor_margin, anchor_hull.signed_distance(p));
    details << ", anchor hull margin " << anchor_margin;
    if (anchor_hull.degenerate) details << " (degenerate anchor hull)";
    rep.margin = std::min(rep.margin, anchor_margin);
    rep.passed = rep.passed && anchor_margin > 0.0;
  }

  rep.details = details.str();
  return rep;
}

std::vector<VerificationReport> hull_field_residual(const film::FilmComplex& f,
                                                    double lambda,
                                                    double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const std::vector<Point> anchors = film::anchor_positions(f);
  if (anchors.empty())
    throw std::invalid_argument("film has no anchors");
  const ConvexPolygon z = geom::convex_hull(anchors);

  const auto field = [&z, eta](Point p) -> Point {
    const HullProjection pr = project_to_hull(z, p);
    if (pr.dist <= 2.0 * eta) return {0.0, 0.0};
    const double g = smoothstep01((pr.dist - 2.0 * eta) / eta);
    return g * pr.grad;
  };

  std::vector<VerificationReport> out;

  {
    VerificationReport rep;
    rep.check = "hull_field_divergence";
    double worst = kInf;
    std::size_t skipped = 0, total = 0;
    for (const film::FilmEdge& e : f.edges) {
      for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
        const Point a = e.chain[i], b = e.chain[i + 1];
        const double len = geom::distance(a, b);
        if (len <= 0.0) continue;
        ++total;
        const HullProjection pa = project_to_hull(z, a);
        const HullProjection pb = project_to_hull(z, b);
        if (pa.feature != pb.feature) {
          ++skipped;
          continue;
        }
        const double v =
            geom::dot(field(b) - field(a), (1.0 / len) * (b - a));
        worst = std::min(worst, v);
      }
    }
    rep.margin = worst == kInf ? 0.0 : worst;
    rep.passed = rep.margin >= -1e-9;
    std::ostringstream d;
    d << "worst tangential increment " << rep.margin << ", skipped " << skipped
      << " of " << total << " segments crossing projection features";
    rep.details = d.str();
    out.push_back(std::move(rep));
  }

  {
    VerificationReport rep;
    rep.check = "hull_field_identity";
    if (lambda > 0.0) {
      rep.passed = true;
      rep.details = "not applicable (λ>0): hypothesis λ≤0 not met";
    } else {
      const double flux = region_flux(f, field, 2);
      double div_sum = 0.0;
      for (const film::FilmEdge& e : f.edges) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
          const Point a = e.chain[i], b = e.chain[i + 1];
          const double len = geom::distance(a, b);
          if (len <= 0.0) continue;
          s += geom::dot(field(b) - field(a), (1.0 / len) * (b - a));
        }
        div_sum += double(e.multiplicity) * s;
      }
      const double residual = std::abs(lambda * flux - div_sum);
      const double tol = 1e-6 * (1.0 + std::abs(lambda));
      rep.margin = tol - residual;
      rep.passed = residual <= tol;
      std::ostringstream d;
      d << "identity residual " << residual << " with the hull field (λ·flux = "
        << lambda * flux << ", divergence sum = " << div_sum << ")";
      rep.details = d.str();
    }
    out.push_back(std::move(rep));
  }

  {
    VerificationReport rep;
    rep.check = "hull_field_region_collar";
    double worst = 0.0;
    for (const film::LiquidRegion& r : f.regions) {
      const Polyline poly = film::region_polygon(f, r);
      for (const Point& p : poly.vertices)
        worst = std::max(worst, project_to_hull(z, p).dist);
    }
    rep.margin = eta - worst;
    if (lambda < 0.0) {
      rep.passed = rep.margin >= 0.0;
      std::ostringstream d;
      d << "max region boundary distance to anchor hull " << worst;
      rep.details = d.str();
    } else {
      rep.passed = true;
      rep.details = "not applicable (λ≥0)";
    }
    out.push_back(std::move(rep));
  }

  return out;
}

double ball_length(const film::FilmComplex& f, Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  double mass = 0.0;
  for (const film::FilmEdge& e : f.edges) {
    for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
      const Point p0 = e.chain[i] - center;
      const Point d = e.chain[i + 1] - e.chain[i];
      const double a2 = geom::dot(d, d);
      if (a2 <= 0.0) continue;
      const double a1 = 2.0 * geom::dot(d, p0);
      const double a0 = geom::dot(p0, p0) - radius * radius;
      const double disc = a1 * a1 - 4.0 * a2 * a0;
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      const double t0 = std::max((-a1 - sq) / (2.0 * a2), 0.0);
      const double t1 = std::min((-a1 + sq) / (2.0 * a2), 1.0);
      if (t1 > t0) mass += (t1 - t0) * std::sqrt(a2);
    }
  }
  return mass;
}

VerificationReport density_check(const film::FilmComplex& f, int samples,
                                 std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");

  std::vector<double> edge_len(f.edges.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    edge_len[i] = geom::polyline_length(film::edge_polyline(f.edges[i]));
    total += edge_len[i];
  }
  if (total <= 0.0) throw std::invalid_argument("film has no length");

  std::mt19937_64 rng(seed);
  double min_theta = kInf;
  Point worst_point{0.0, 0.0};
  double worst_radius = 0.0;
  int taken = 0;
  int attempts = 0;

  while (taken < samples && attempts < 50 * samples) {
    ++attempts;
    double s = u01(rng) * total;
    std::size_t ei = 0;
    while (ei + 1 < f.edges.size() && s > edge_len[ei]) {
      s -= edge_len[ei];
      ++ei;
    }
    const auto& chain = f.edges[ei].chain;
    Point x = chain.front();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const double seg = geom::distance(chain[i], chain[i + 1]);
      if (acc + seg >= s) {
        const double t = seg > 0.0 ? (s - acc) / seg : 0.0;
        x = chain[i] + t * (chain[i + 1] - chain[i]);
        break;
      }
      acc += seg;
      x = chain[i + 1];
    }

    const double clearance = dist_to_wire(f.wire, x);
    if (clearance <= 1e-9) continue;
    const double r = (0.05 + 0.95 * u01(rng)) * 0.9 * clearance;
    if (!(r > 0.0)) continue;
    ++taken;

    const double theta = ball_length(f, x, r) / r;
    if (theta < min_theta) {
      min_theta = theta;
      worst_point = x;
      worst_radius = r;
    }
  }

  VerificationReport rep;
  rep.check = "density";
  if (taken == 0) {
    rep.passed = false;
    rep.details = "no admissible sample points found";
    return rep;
  }
  rep.margin = min_theta - 1.0;
  rep.passed = min_theta >= 1.0 - 1e-6;
  std::ostringstream d;
  d << "min ratio " << min_theta << " at (" << worst_point.x << ", "
    << worst_point.y << "), r = " << worst_radius << ", " << taken
    << " samples";
  rep.details = d.str();
  return rep;
}

}  // namespace capfilm::verify
