#include "capfilm/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace capfilm::perturb {

using geom::Point;
using geom::Polyline;
using film::FilmComplex;
using film::FilmEdge;
using film::FilmVertex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> cumulative(const std::vector<Point>& pts) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i)
    s[i] = s[i - 1] + geom::distance(pts[i - 1], pts[i]);
  return s;
}

Point point_at(const std::vector<Point>& pts, const std::vector<double>& cum,
               double s) {
  if (s <= 0.0) return pts.front();
  if (s >= cum.back()) return pts.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), s);
  const std::size_t i = std::size_t(it - cum.begin());
  const double t = (s - cum[i - 1]) / std::max(cum[i] - cum[i - 1], 1e-300);
  return pts[i - 1] + t * (pts[i] - pts[i - 1]);
}

// Insert points inside each segment without moving the originals, so the
// chain's geometry (length, enclosed areas) is preserved exactly.
std::vector<Point> subdivide_chain(const std::vector<Point>& chain,
                                   double spacing) {
  std::vector<Point> out;
  out.push_back(chain.front());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const Point a = chain[i], b = chain[i + 1];
    const double len = geom::distance(a, b);
    const int k = std::max(1, int(std::ceil(len / spacing)));
    for (int j = 1; j < k; ++j)
      out.push_back(a + (double(j) / double(k)) * (b - a));
    out.push_back(b);
  }
  return out;
}

double dist_to_disks(const film::WireFrame& w, Point p) {
  double best = kInf;
  for (const film::Disk& d : w.disks)
    best = std::min(best, std::max(0.0, geom::distance(p, d.center) - d.radius));
  return best;
}

double dist_to_points(const std::vector<Point>& pts, Point p) {
  double best = kInf;
  for (const Point& q : pts) best = std::min(best, geom::distance(p, q));
  return best;
}

// Largest r (up to cap) such that no part of the chain more than 3r away in
// arclength comes within r of sample i.
double own_clearance(const std::vector<Point>& c,
                     const std::vector<double>& cum, std::size_t i,
                     double cap) {
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 8; ++it) {
    const double r = 0.5 * (lo + hi);
    bool ok = true;
    for (std::size_t j = 0; j < c.size() && ok; ++j) {
      if (std::abs(cum[j] - cum[i]) <= 3.0 * r) continue;
      if (geom::distance(c[j], c[i]) < r) ok = false;
    }
    (ok ? lo : hi) = r;
  }
  return lo;
}

struct Surroundings {
  std::vector<Point> sigma;          // vertex positions
  std::vector<Polyline> region_polys;
  std::vector<Polyline> edge_polys;  // all original chains
};

Surroundings surroundings_of(const FilmComplex& f) {
  Surroundings s;
  for (const FilmVertex& v : f.vertices) s.sigma.push_back(v.position);
  for (const film::LiquidRegion& r : f.regions)
    s.region_polys.push_back(film::region_polygon(f, r));
  for (const FilmEdge& e : f.edges) s.edge_polys.push_back(film::edge_polyline(e));
  return s;
}

// Clearance of a point within the network, ignoring one host chain (the
// host's own non-local proximity is handled by own_clearance).
double other_clearance(const Surroundings& s, std::size_t host, Point p) {
  double best = kInf;
  for (std::size_t j = 0; j < s.edge_polys.size(); ++j) {
    if (j == host) continue;
    best = std::min(best, geom::min_distance(p, s.edge_polys[j]));
  }
  return best;
}

struct NearestHit {
  double dist = kInf;
  double s = 0.0;
};

NearestHit nearest_on_chain(const std::vector<Point>& c,
                            const std::vector<double>& cum, Point x) {
  NearestHit best;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Point d = c[i + 1] - c[i];
    const double len2 = geom::dot(d, d);
    double t = len2 > 0.0 ? geom::dot(x - c[i], d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Point q = c[i] + t * d;
    const double dist = geom::distance(x, q);
    if (dist < best.dist) {
      best.dist = dist;
      best.s = cum[i] + t * (cum[i + 1] - cum[i]);
    }
  }
  return best;
}

FilmVertex junction_at(Point p) {
  FilmVertex v;
  v.position = p;
  v.kind = film::VertexKind::free_junction;
  return v;
}

}  // namespace

DecollapseResult decollapse(const FilmComplex& f, DecollapseParams p) {
  if (!(p.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(p.delta > 0.0 && p.delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  std::vector<std::size_t> doubled;
  for (std::size_t i = 0; i < f.edges.size(); ++i)
    if (f.edges[i].multiplicity == 2) doubled.push_back(i);
  if (doubled.empty()) throw std::invalid_argument("nothing to open");

  const Surroundings env = surroundings_of(f);

  double delta = p.delta;
  for (int attempt = 0; attempt < 10; ++attempt, delta *= 0.5) {
    try {
      FilmComplex out;
      out.wire = f.wire;
      out.vertices = f.vertices;
      out.regions = f.regions;
      out.edges = f.edges;

      for (const std::size_t idx : doubled) {
        const FilmEdge& e = f.edges[idx];
        const double len = geom::polyline_length(film::edge_polyline(e));
        const double spacing =
            std::max(std::min(p.eta / 4.0, len / 16.0), len / 1200.0);
        // Insert-only densification keeps the sample chain geometrically
        // identical to the original, so the retained sheet is exact.
        const std::vector<Point> c = subdivide_chain(e.chain, spacing);
        const std::vector<double> cum = cumulative(c);

        double max_curv = 0.0;
        if (c.size() >= 3) {
          Polyline pl;
          pl.vertices = c;
          for (const double k : geom::fit_curvature(pl, 1))
            max_curv = std::max(max_curv, std::abs(k));
        }

        geom::ScalarField u(c.size(), 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
          double cap = p.eta;
          double near = dist_to_points(env.sigma, c[i]);
          for (const Polyline& rp : env.region_polys)
            near = std::min(near, geom::min_distance(c[i], rp));
          near = std::min(near, dist_to_disks(f.wire, c[i]));
          cap = std::min(cap, 0.5 * near);
          const double rho = std::min(own_clearance(c, cum, i, len),
                                      other_clearance(env, idx, c[i]));
          cap = std::min(cap, delta * rho);
          if (max_curv > 1e-12) cap = std::min(cap, delta / max_curv);
          u[i] = std::max(cap, 0.0);
        }
        u.front() = 0.0;
        u.back() = 0.0;

        Polyline base;
        base.vertices = c;
        Polyline offset;
        int side_used = 0;
        double best_score = -kInf;
        for (const int side : {+1, -1}) {
          Polyline cand;
          try {
            cand = geom::normal_offset(base, u, side);
          } catch (const std::runtime_error&) {
            continue;
          }
          double score = kInf;
          for (std::size_t i = 1; i + 1 < cand.vertices.size(); ++i) {
            const Point q = cand.vertices[i];
            score = std::min(score, other_clearance(env, idx, q));
            score = std::min(score, dist_to_disks(f.wire, q));
            for (const Polyline& rp : env.region_polys)
              score = std::min(score, geom::min_distance(q, rp));
          }
          if (score > best_score) {
            best_score = score;
            offset = std::move(cand);
            side_used = side;
          }
        }
        if (side_used == 0)
          throw std::runtime_error("no embeddable offset side");

        // The original chain stays in place as one sheet of the tube.
        FilmEdge base_sheet = e;
        base_sheet.multiplicity = 1;
        FilmEdge off_sheet;
        off_sheet.v0 = e.v0;
        off_sheet.v1 = e.v1;
        off_sheet.multiplicity = 1;
        off_sheet.chain = offset.vertices;
        out.edges[idx] = std::move(base_sheet);
        const int off_idx = int(out.edges.size());
        out.edges.push_back(std::move(off_sheet));
        // side +1 puts the offset to the right of the travel direction,
        // so it is traversed forward in the CCW tube loop.
        if (side_used > 0)
          out.regions.push_back({{{off_idx, true}, {int(idx), false}}});
        else
          out.regions.push_back({{{int(idx), true}, {off_idx, false}}});
      }

      const auto bad = film::validate(out);
      if (!bad.empty())
        throw std::runtime_error("opened film invalid: " + bad.front().code);
      DecollapseResult res;
      res.boundary_length = film::relaxed_energy(out);
      res.film = std::move(out);
      return res;
    } catch (const std::runtime_error&) {
      // offsets collided; retry with a smaller clearance fraction
    }
  }
  throw std::runtime_error("decollapse failed to embed");
}

namespace {

struct WindowPlan {
  std::vector<Point> dense;
  std::vector<double> cum;
  std::size_t i_lo = 0, i_hi = 0;
  std::vector<double> weight;  // per dense sample, zero outside the window
  double max_weight = 0.0;
  Point normal{0, 0};
};

WindowPlan plan_window(const std::vector<Point>& chain, Point x, double radius,
                       Point normal_hint) {
  WindowPlan wp;
  const std::vector<double> cum0 = cumulative(chain);
  const double len = cum0.back();
  const double spacing = std::clamp(radius / 24.0, len / 4000.0, len / 8.0);
  wp.dense = subdivide_chain(chain, spacing);
  wp.cum = cumulative(wp.dense);
  const NearestHit hit = nearest_on_chain(wp.dense, wp.cum, x);
  const double s0 = hit.s;
  if (s0 - radius <= wp.cum[1] || s0 + radius >= wp.cum[wp.cum.size() - 2])
    throw std::invalid_argument("bump window reaches a chain end");

  wp.i_lo = 0;
  while (wp.cum[wp.i_lo] < s0 - radius) ++wp.i_lo;
  wp.i_hi = wp.cum.size() - 1;
  while (wp.cum[wp.i_hi] > s0 + radius) --wp.i_hi;

  const double c = 15.0 / (16.0 * radius);
  wp.weight.assign(wp.dense.size(), 0.0);
  for (std::size_t i = wp.i_lo + 1; i < wp.i_hi; ++i) {
    const double z = (wp.cum[i] - s0) / radius;
    if (std::abs(z) < 1.0) {
      const double q = 1.0 - z * z;
      wp.weight[i] = c * q * q;
    }
  }
  for (const double w : wp.weight) wp.max_weight = std::max(wp.max_weight, w);
  if (wp.max_weight <= 0.0)
    throw std::invalid_argument("bump window too small for the chain");

  // Tangent at the window center, then a fixed transverse direction; using
  // one direction for the whole window keeps the moved area linear in the
  // amplitude.
  std::size_t j = 1;
  while (j + 1 < wp.cum.size() && wp.cum[j] < s0) ++j;
  const Point tangent = geom::normalized(wp.dense[j] - wp.dense[j - 1]);
  Point n = geom::left_normal(tangent);
  if (geom::dot(n, normal_hint) < 0.0) n = -1.0 * n;
  wp.normal = n;
  return wp;
}

double window_clearance(const Surroundings& env, const film::WireFrame& w,
                        std::size_t host, const WindowPlan& wp) {
  double best = kInf;
  for (std::size_t i = wp.i_lo; i <= wp.i_hi; ++i) {
    const Point p = wp.dense[i];
    best = std::min(best, other_clearance(env, host, p));
    best = std::min(best, dist_to_disks(w, p));
    best = std::min(best, own_clearance(wp.dense, wp.cum, i, wp.cum.back()));
  }
  return best;
}

}  // namespace

FilmComplex bump_competitor(const FilmComplex& f, Point x1, Point x2,
                            double t) {
  if (film::classify(f) != film::Classification::exteriorly_collapsed)
    throw std::invalid_argument("f must be exteriorly collapsed");
  if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
  if (t == 0.0) return f;

  const Surroundings env = surroundings_of(f);
  const film::Bounds bb = film::film_bounds(f);
  const double diam = geom::distance(bb.lo, bb.hi);

  // Host doubled edge for the pocket.
  int host1 = -1;
  {
    double best = kInf;
    for (std::size_t i = 0; i < f.edges.size(); ++i) {
      if (f.edges[i].multiplicity != 2) continue;
      const auto cum = cumulative(f.edges[i].chain);
      const NearestHit hit = nearest_on_chain(f.edges[i].chain, cum, x1);
      if (hit.dist < best) {
        best = hit.dist;
        host1 = int(i);
      }
    }
    if (host1 < 0 || best > 1e-6 * diam)
      throw std::invalid_argument("x1 must lie on a doubled edge");
  }
  const double r1 = 0.45 * dist_to_points(env.sigma, x1);
  if (!(r1 > 0.0)) throw std::invalid_argument("x1 sits on a vertex");

  // Host region boundary edge for the dent.
  int host2 = -1;
  bool host2_forward = true;
  int host2_region = -1;
  {
    double best = kInf;
    for (std::size_t ri = 0; ri < f.regions.size(); ++ri) {
      for (const film::OrientedEdge& oe : f.regions[ri].loop) {
        const FilmEdge& e = f.edges[std::size_t(oe.edge)];
        const auto cum = cumulative(e.chain);
        const NearestHit hit = nearest_on_chain(e.chain, cum, x2);
        if (hit.dist < best) {
          best = hit.dist;
          host2 = oe.edge;
          host2_forward = oe.forward;
          host2_region = int(ri);
        }
      }
    }
    if (host2 < 0 || best > 1e-6 * diam)
      throw std::invalid_argument("x2 must lie on a region boundary");
  }
  const double r2 = 0.45 * dist_to_points(env.sigma, x2);
  if (!(r2 > 0.0)) throw std::invalid_argument("x2 sits on a vertex");

  // Pocket window: displacement straddles the chain, so the hint only fixes
  // a sign convention.
  WindowPlan w1 = plan_window(f.edges[std::size_t(host1)].chain, x1, r1,
                              Point{1.0, 0.0});
  // Dent window: displacement must point into the region, against the
  // outward normal of the CCW loop.
  WindowPlan w2 = plan_window(f.edges[std::size_t(host2)].chain, x2, r2,
                              Point{1.0, 0.0});
  {
    std::size_t j = (w2.i_lo + w2.i_hi) / 2;
    if (j + 1 >= w2.dense.size()) j = w2.dense.size() - 2;
    Point travel = w2.dense[j + 1] - w2.dense[j];
    if (!host2_forward) travel = -1.0 * travel;
    const Point outward = geom::right_normal(geom::normalized(travel));
    if (geom::dot(w2.normal, outward) < 0.0) w2.normal = -1.0 * w2.normal;
  }

  // Affine area coefficients, measured at unit amplitude.  The sign of the
  // pocket loop records which offset chain is the CCW lower boundary.
  double gain_signed = 0.0;
  {
    Polyline loop;
    loop.closed = true;
    for (std::size_t i = w1.i_lo; i <= w1.i_hi; ++i)
      loop.vertices.push_back(w1.dense[i] - w1.weight[i] * w1.normal);
    for (std::size_t i = w1.i_hi - 1; i > w1.i_lo; --i)
      loop.vertices.push_back(w1.dense[i] + w1.weight[i] * w1.normal);
    gain_signed = geom::signed_area(loop);
  }
  const double gain = std::abs(gain_signed);
  double loss = 0.0;
  {
    const auto dent_area = [&](double a) {
      FilmComplex g = f;
      auto& chain = g.edges[std::size_t(host2)].chain;
      chain = w2.dense;
      for (std::size_t i = 0; i < chain.size(); ++i)
        chain[i] = chain[i] - (a * w2.weight[i]) * w2.normal;
      return geom::signed_area(
          film::region_polygon(g, g.regions[std::size_t(host2_region)]));
    };
    loss = dent_area(0.0) - dent_area(1.0);
  }
  if (gain <= 0.0 || loss <= 0.0)
    throw std::runtime_error("bump area coefficients degenerate");
  const double a1 = t / gain;
  const double a2 = t / loss;

  // Admissible range: displacements stay well inside the local clearance.
  const double clear1 =
      window_clearance(env, f.wire, std::size_t(host1), w1);
  const double clear2 =
      window_clearance(env, f.wire, std::size_t(host2), w2);
  const double t_max =
      std::min(gain * 0.45 * clear1 / w1.max_weight,
               loss * 0.45 * clear2 / w2.max_weight);
  if (t > t_max)
    throw std::invalid_argument("t too large (max admissible t = " +
                                std::to_string(t_max) + ")");

  FilmComplex out = f;

  // Dent the region boundary.
  {
    auto& chain = out.edges[std::size_t(host2)].chain;
    chain = w2.dense;
    for (std::size_t i = 0; i < chain.size(); ++i)
      chain[i] = chain[i] - (a2 * w2.weight[i]) * w2.normal;
  }

  // Open the pocket: split the doubled edge around the window.
  {
    const FilmEdge host = out.edges[std::size_t(host1)];
    const int jlo = int(out.vertices.size());
    out.vertices.push_back(junction_at(w1.dense[w1.i_lo]));
    const int jhi = int(out.vertices.size());
    out.vertices.push_back(junction_at(w1.dense[w1.i_hi]));

    FilmEdge stub_a;
    stub_a.v0 = host.v0;
    stub_a.v1 = jlo;
    stub_a.multiplicity = 2;
    stub_a.chain.assign(w1.dense.begin(),
                        w1.dense.begin() + long(w1.i_lo) + 1);

    FilmEdge stub_b;
    stub_b.v0 = jhi;
    stub_b.v1 = host.v1;
    stub_b.multiplicity = 2;
    stub_b.chain.assign(w1.dense.begin() + long(w1.i_hi), w1.dense.end());

    FilmEdge lower;
    lower.v0 = jlo;
    lower.v1 = jhi;
    lower.multiplicity = 1;
    FilmEdge upper = lower;
    for (std::size_t i = w1.i_lo; i <= w1.i_hi; ++i) {
      lower.chain.push_back(w1.dense[i] - (a1 * w1.weight[i]) * w1.normal);
      upper.chain.push_back(w1.dense[i] + (a1 * w1.weight[i]) * w1.normal);
    }

    out.edges[std::size_t(host1)] = std::move(stub_a);
    out.edges.push_back(std::move(stub_b));
    const int idx_lower = int(out.edges.size());
    out.edges.push_back(std::move(lower));
    const int idx_upper = int(out.edges.size());
    out.edges.push_back(std::move(upper));
    if (gain_signed > 0.0)
      out.regions.push_back({{{idx_lower, true}, {idx_upper, false}}});
    else
      out.regions.push_back({{{idx_upper, true}, {idx_lower, false}}});
  }

  const auto bad = film::validate(out);
  if (!bad.empty())
    throw std::runtime_error("bump produced invalid film: " +
                             bad.front().code);
  return out;
}

namespace {

void pick_points(const FilmComplex& f, Point& x1, Point& x2) {
  const Surroundings env = surroundings_of(f);
  double best_len = -1.0;
  for (const FilmEdge& e : f.edges) {
    if (e.multiplicity != 2) continue;
    const auto cum = cumulative(e.chain);
    if (cum.back() > best_len) {
      best_len = cum.back();
      x1 = point_at(e.chain, cum, 0.5 * cum.back());
    }
  }
  if (best_len < 0.0)
    throw std::invalid_argument("film has no doubled edge");

  double best_score = -1.0;
  for (const film::LiquidRegion& r : f.regions) {
    for (const film::OrientedEdge& oe : r.loop) {
      const FilmEdge& e = f.edges[std::size_t(oe.edge)];
      for (const Point& p : e.chain) {
        const double score =
            std::min(dist_to_points(env.sigma, p), geom::distance(p, x1));
        if (score > best_score) {
          best_score = score;
          x2 = p;
        }
      }
    }
  }
  if (best_score < 0.0)
    throw std::invalid_argument("film has no region boundary");
}

}  // namespace

PerturbationTrace expansion_fit(const FilmComplex& f,
                                const std::vector<double>& ts) {
  Point x1, x2;
  pick_points(f, x1, x2);
  return expansion_fit(f, ts, x1, x2);
}

PerturbationTrace expansion_fit(const FilmComplex& f,
                                const std::vector<double>& ts, Point x1,
                                Point x2) {
  if (ts.size() < 4)
    throw std::invalid_argument("need at least 4 perturbation sizes");
  double lo = kInf, hi = 0.0;
  for (const double t : ts) {
    if (!(t > 0.0))
      throw std::invalid_argument("perturbation sizes must be positive");
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  if (hi < 10.0 * lo * (1.0 - 1e-12))
    throw std::invalid_argument("perturbation sizes must span a decade");

  PerturbationTrace trace;
  trace.ts = ts;
  trace.baseline = film::relaxed_energy(f);
  for (const double t : ts) {
    try {
      trace.energies.push_back(
          film::relaxed_energy(bump_competitor(f, x1, x2, t)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string(e.what()) +
                                  " at t = " + std::to_string(t));
    }
  }

  // Least squares for F0 + s t + q t^2.
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0, sy = 0, sty = 0, st2y = 0;
  const double n = double(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i], y = trace.energies[i];
    s1 += t;
    s2 += t * t;
    s3 += t * t * t;
    s4 += t * t * t * t;
    sy += y;
    sty += t * y;
    st2y += t * t * y;
  }
  const double det = n * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) +
                     s2 * (s1 * s3 - s2 * s2);
  if (std::abs(det) < 1e-300)
    throw std::runtime_error("perturbation fit singular");
  const double det_s = n * (sty * s4 - s3 * st2y) - sy * (s1 * s4 - s2 * s3) +
                       s2 * (s1 * st2y - sty * s2);
  const double det_q = n * (s2 * st2y - sty * s3) - s1 * (s1 * st2y - sty * s2) +
                       sy * (s1 * s3 - s2 * s2);
  trace.fitted_slope = det_s / det;
  trace.fitted_quadratic = det_q / det;
  return trace;
}

ProbeResult upper_bound_probe(const film::WireFrame& w,
                              const span::SpanningSpec& spec, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("ε must be positive");
  const span::SteinerResult base = span::steiner_baseline(w, spec);

  FilmComplex doubled = base.network;
  for (FilmEdge& e : doubled.edges) e.multiplicity = 2;

  double eta = std::min(0.45 * epsilon / std::max(base.length, 1e-12),
                        1.0 / 16.0);
  FilmComplex opened;
  double pocket = 0.0;
  for (int i = 0; i < 48; ++i) {
    opened = decollapse(doubled, {eta, 0.25}).film;
    pocket = film::liquid_volume(opened);
    if (pocket < epsilon) break;
    eta *= 0.5;
  }
  if (pocket >= epsilon)
    throw std::runtime_error("pocket area failed to shrink below epsilon");

  const double ball_area = epsilon - pocket;
  const int n = 128;
  const double r =
      std::sqrt(2.0 * ball_area /
                (double(n) * std::sin(2.0 * std::numbers::pi / double(n))));
  const film::Bounds bb = film::film_bounds(opened);
  const double diam = geom::distance(bb.lo, bb.hi);
  const Point center{bb.hi.x + diam + 2.0 * r, 0.5 * (bb.lo.y + bb.hi.y)};
  if (!(center.x - r - bb.hi.x >= diam - 1e-9) || !std::isfinite(center.x))
    throw std::runtime_error("no placement room");

  std::vector<Point> ring;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / double(n);
    ring.push_back(center + Point{r * std::cos(th), r * std::sin(th)});
  }
  ring.push_back(ring.front());
  const int vid = int(opened.vertices.size());
  opened.vertices.push_back(junction_at(ring.front()));
  FilmEdge ball;
  ball.v0 = vid;
  ball.v1 = vid;
  ball.multiplicity = 1;
  ball.chain = std::move(ring);
  const int eid = int(opened.edges.size());
  opened.edges.push_back(std::move(ball));
  opened.regions.push_back({{{eid, true}}});

  ProbeResult res;
  res.energy = film::relaxed_energy(opened);
  res.film = std::move(opened);
  res.baseline_length = base.length;
  res.pocket_area = pocket;
  res.ball_area = ball_area;
  return res;
}

}  // namespace capfilm::perturb
