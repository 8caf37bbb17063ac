#include "capfilm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "capfilm/kernels.hpp"

namespace capfilm::solve {

using geom::Point;
using geom::Polyline;
using film::FilmComplex;
using film::FilmEdge;
using film::FilmVertex;

double scenario_resolution(const Scenario& s) {
  return s.resolution > 0.0 ? s.resolution : span::default_resolution(s.wire);
}

namespace {

std::vector<int> vertex_degree(const FilmComplex& f) {
  std::vector<int> deg(f.vertices.size(), 0);
  for (const FilmEdge& e : f.edges) {
    deg[std::size_t(e.v0)]++;
    deg[std::size_t(e.v1)]++;
  }
  return deg;
}

// One polygon vertex of a region loop: a chain slot, plus the film
// vertex id when the slot is a chain endpoint.
struct PathEntry {
  int edge = -1;
  int chain_idx = -1;
  int vertex = -1;
  bool eligible = false;  // moved by the volume projection
};

struct RegionPath {
  std::vector<PathEntry> entries;
  std::vector<double> buf;  // interleaved xy scratch
};

struct Flow {
  FilmComplex f;
  const SolveConfig* cfg = nullptr;
  std::vector<RegionPath> paths;
  std::vector<char> vertex_movable;
  std::vector<std::vector<Point>> gchain;
  std::vector<Point> gvert;
  std::vector<std::vector<double>> wchain;
  std::vector<double> wvert;

  void sync_endpoints() {
    for (FilmEdge& e : f.edges) {
      e.chain.front() = f.vertices[std::size_t(e.v0)].position;
      e.chain.back() = f.vertices[std::size_t(e.v1)].position;
    }
  }

  Point get(const PathEntry& p) const {
    return f.edges[std::size_t(p.edge)].chain[std::size_t(p.chain_idx)];
  }

  void shift(const PathEntry& p, Point delta) {
    if (p.vertex >= 0) {
      f.vertices[std::size_t(p.vertex)].position =
          f.vertices[std::size_t(p.vertex)].position + delta;
    } else {
      auto& q = f.edges[std::size_t(p.edge)].chain[std::size_t(p.chain_idx)];
      q = q + delta;
    }
  }

  void build_paths() {
    const std::vector<int> deg = vertex_degree(f);
    paths.clear();
    for (const film::LiquidRegion& r : f.regions) {
      RegionPath rp;
      for (const film::OrientedEdge& oe : r.loop) {
        const FilmEdge& e = f.edges[std::size_t(oe.edge)];
        const int k = int(e.chain.size());
        if (oe.forward) {
          for (int i = 0; i + 1 < k; ++i) {
            PathEntry p;
            p.edge = oe.edge;
            p.chain_idx = i;
            if (i == 0) p.vertex = e.v0;
            rp.entries.push_back(p);
          }
        } else {
          for (int i = k - 1; i > 0; --i) {
            PathEntry p;
            p.edge = oe.edge;
            p.chain_idx = i;
            if (i == k - 1) p.vertex = e.v1;
            rp.entries.push_back(p);
          }
        }
      }
      for (PathEntry& p : rp.entries) {
        if (p.vertex < 0) {
          p.eligible = true;
        } else {
          // Free junctions carry a nonzero discrete area gradient, so
          // constrained stationarity there is g = lambda * a, not g = 0.
          const FilmVertex& v = f.vertices[std::size_t(p.vertex)];
          p.eligible = v.kind == film::VertexKind::free_junction &&
                       deg[std::size_t(p.vertex)] >= 2;
        }
      }
      rp.buf.resize(rp.entries.size() * 2);
      paths.push_back(std::move(rp));
    }
  }

  double area_of(RegionPath& rp) {
    for (std::size_t i = 0; i < rp.entries.size(); ++i) {
      const Point p = get(rp.entries[i]);
      rp.buf[2 * i] = p.x;
      rp.buf[2 * i + 1] = p.y;
    }
    return 0.5 * kernels::active().shoelace2(rp.buf.data(), rp.entries.size());
  }

  double total_area() {
    double acc = 0.0;
    for (RegionPath& rp : paths) acc += area_of(rp);
    return acc;
  }

  // Multiplicity-weighted dual arclength per point. Dividing gradients
  // by it turns the raw length gradient into curvature, which makes the
  // flow's rates mesh independent instead of stiffening as spacing
  // shrinks.
  void dual_weights() {
    wchain.resize(f.edges.size());
    for (std::size_t e = 0; e < f.edges.size(); ++e)
      wchain[e].assign(f.edges[e].chain.size(), 0.0);
    wvert.assign(f.vertices.size(), 0.0);
    for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
      const FilmEdge& e = f.edges[ei];
      const double m = double(e.multiplicity);
      const std::size_t k = e.chain.size();
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const double half = 0.5 * m * geom::distance(e.chain[i], e.chain[i + 1]);
        if (i == 0)
          wvert[std::size_t(e.v0)] += half;
        else
          wchain[ei][i] += half;
        if (i + 2 == k)
          wvert[std::size_t(e.v1)] += half;
        else
          wchain[ei][i + 1] += half;
      }
    }
  }

  double weight_of(const PathEntry& p) const {
    const double w = p.vertex >= 0
                         ? wvert[std::size_t(p.vertex)]
                         : wchain[std::size_t(p.edge)][std::size_t(p.chain_idx)];
    return std::max(w, 1e-300);
  }

  // Shifts eligible boundary points by s times the pointwise area
  // gradient over the dual weight until the total area matches target.
  // Moving along the constraint gradient in the same metric as descend
  // keeps descend-then-project a projected gradient step, so small
  // steps cannot raise the energy.
  bool project_volume(double target, double tol) {
    // Newton runs to float precision regardless of tol: leaving the
    // volume anywhere inside a looser window makes the next call move
    // it again, which jitters the energy by lambda times the window
    // and defeats step acceptance.
    const double ptol = 1e-15 * (1.0 + std::abs(target));
    for (int pass = 0; pass < 12; ++pass) {
      const double vol = total_area();
      if (std::abs(vol - target) <= ptol) return true;
      dual_weights();
      double dads = 0.0;
      for (RegionPath& rp : paths) {
        const std::size_t n = rp.entries.size();
        for (std::size_t i = 0; i < n; ++i) {
          if (!rp.entries[i].eligible) continue;
          const Point prev = get(rp.entries[(i + n - 1) % n]);
          const Point next = get(rp.entries[(i + 1) % n]);
          const Point a = 0.5 * geom::right_normal(next - prev);
          dads += geom::dot(a, a) / weight_of(rp.entries[i]);
        }
      }
      if (dads < 1e-14) return false;
      const double s = (target - vol) / dads;
      for (RegionPath& rp : paths) {
        const std::size_t n = rp.entries.size();
        for (std::size_t i = 0; i < n; ++i) {
          if (!rp.entries[i].eligible) continue;
          const Point prev = get(rp.entries[(i + n - 1) % n]);
          const Point next = get(rp.entries[(i + 1) % n]);
          const Point a = 0.5 * geom::right_normal(next - prev);
          shift(rp.entries[i], (s / weight_of(rp.entries[i])) * a);
        }
        // entries were read from possibly stale neighbors within this
        // pass; acceptable, Newton re-measures next pass
      }
      sync_endpoints();
    }
    const double vol = total_area();
    return std::abs(vol - target) <= std::max(tol, ptol);
  }

  void zero_gradient() {
    gchain.resize(f.edges.size());
    for (std::size_t e = 0; e < f.edges.size(); ++e)
      gchain[e].assign(f.edges[e].chain.size(), Point{0, 0});
    gvert.assign(f.vertices.size(), Point{0, 0});
  }

  // Gradient of total multiplicity-weighted length.
  void length_gradient() {
    zero_gradient();
    dual_weights();
    for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
      const FilmEdge& e = f.edges[ei];
      const double m = double(e.multiplicity);
      const std::size_t k = e.chain.size();
      for (std::size_t i = 0; i + 1 < k; ++i) {
        const Point d = e.chain[i + 1] - e.chain[i];
        const double len = geom::norm(d);
        if (len < 1e-300) continue;
        const Point u = (m / len) * d;
        // d|d|/d(front) = -u, d|d|/d(back) = +u
        if (i == 0)
          gvert[std::size_t(e.v0)] = gvert[std::size_t(e.v0)] - u;
        else
          gchain[ei][i] = gchain[ei][i] - u;
        if (i + 2 == k)
          gvert[std::size_t(e.v1)] = gvert[std::size_t(e.v1)] + u;
        else
          gchain[ei][i + 1] = gchain[ei][i + 1] + u;
      }
    }
    for (std::size_t vi = 0; vi < f.vertices.size(); ++vi) {
      const FilmVertex& v = f.vertices[vi];
      if (!vertex_movable[vi]) {
        gvert[vi] = Point{0, 0};
        continue;
      }
      if (v.kind == film::VertexKind::anchor) {
        const film::Disk& d = f.wire.disks[std::size_t(v.disk)];
        const Point nrm = geom::normalized(v.position - d.center);
        gvert[vi] = gvert[vi] - geom::dot(gvert[vi], nrm) * nrm;
      }
    }
  }

  // Residual of constrained stationarity: the length gradient minus
  // its best multiple of the area gradient on eligible points.
  double stationarity_residual() {
    double ga = 0.0, aa = 0.0;
    for (RegionPath& rp : paths) {
      const std::size_t n = rp.entries.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (!rp.entries[i].eligible) continue;
        const PathEntry& p = rp.entries[i];
        const Point g = p.vertex >= 0 ? gvert[std::size_t(p.vertex)]
                                      : gchain[std::size_t(p.edge)]
                                             [std::size_t(p.chain_idx)];
        const Point prev = get(rp.entries[(i + n - 1) % n]);
        const Point next = get(rp.entries[(i + 1) % n]);
        const Point a = 0.5 * geom::right_normal(next - prev);
        ga += geom::dot(g, a);
        aa += geom::dot(a, a);
      }
    }
    const double mult = aa > 1e-300 ? ga / aa : 0.0;

    // Interior knots are parameterization, not geometry: redistribute
    // owns their tangential placement, so only the normal component of
    // the gradient is a real stationarity defect there. Vertices keep
    // both components.
    const auto knot_normal_defect = [this](int edge, int idx, Point r) {
      const auto& ch = f.edges[std::size_t(edge)].chain;
      const Point t =
          geom::normalized(ch[std::size_t(idx) + 1] - ch[std::size_t(idx) - 1]);
      r = r - geom::dot(r, t) * t;
      return std::max(std::abs(r.x), std::abs(r.y));
    };

    std::vector<char> on_region_v(f.vertices.size(), 0);
    double worst = 0.0;
    for (RegionPath& rp : paths) {
      const std::size_t n = rp.entries.size();
      for (std::size_t i = 0; i < n; ++i) {
        const PathEntry& p = rp.entries[i];
        Point g = p.vertex >= 0
                      ? gvert[std::size_t(p.vertex)]
                      : gchain[std::size_t(p.edge)][std::size_t(p.chain_idx)];
        if (rp.entries[i].eligible) {
          const Point prev = get(rp.entries[(i + n - 1) % n]);
          const Point next = get(rp.entries[(i + 1) % n]);
          const Point a = 0.5 * geom::right_normal(next - prev);
          g = g - mult * a;
        }
        if (p.vertex >= 0) {
          worst = std::max(worst, std::max(std::abs(g.x), std::abs(g.y)));
          on_region_v[std::size_t(p.vertex)] = 1;
        } else {
          worst = std::max(worst, knot_normal_defect(p.edge, p.chain_idx, g));
        }
      }
    }
    for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
      bool in_region = false;
      for (const RegionPath& rp : paths)
        for (const PathEntry& p : rp.entries)
          if (p.edge == int(ei)) {
            in_region = true;
            break;
          }
      if (in_region) continue;
      for (std::size_t i = 1; i + 1 < gchain[ei].size(); ++i)
        worst = std::max(worst,
                         knot_normal_defect(int(ei), int(i), gchain[ei][i]));
    }
    for (std::size_t vi = 0; vi < f.vertices.size(); ++vi) {
      if (on_region_v[vi]) continue;
      worst = std::max(worst, std::max(std::abs(gvert[vi].x),
                                       std::abs(gvert[vi].y)));
    }
    return worst;
  }

  void descend(double step) {
    for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
      auto& chain = f.edges[ei].chain;
      for (std::size_t i = 1; i + 1 < chain.size(); ++i)
        chain[i] =
            chain[i] -
            (step / std::max(wchain[ei][i], 1e-300)) * gchain[ei][i];
    }
    for (std::size_t vi = 0; vi < f.vertices.size(); ++vi) {
      if (!vertex_movable[vi]) continue;
      FilmVertex& v = f.vertices[vi];
      v.position =
          v.position - (step / std::max(wvert[vi], 1e-300)) * gvert[vi];
      if (v.kind == film::VertexKind::anchor) {
        const film::Disk& d = f.wire.disks[std::size_t(v.disk)];
        v.position = d.center + d.radius * geom::normalized(v.position - d.center);
      }
    }
    sync_endpoints();
    push_out_of_disks();
  }

  // Slides interior knots along each polyline to uniform arclength,
  // keeping the knot count and the traced curve unchanged. Without
  // this the flow spends its tail chasing knot placements that game
  // the chord-length energy, and junction spacing turns lopsided.
  void redistribute() {
    std::vector<double> cum;
    for (FilmEdge& e : f.edges) {
      const std::size_t k = e.chain.size();
      if (k < 3) continue;
      cum.assign(k, 0.0);
      for (std::size_t i = 1; i < k; ++i)
        cum[i] = cum[i - 1] + geom::distance(e.chain[i - 1], e.chain[i]);
      const double total = cum.back();
      if (total < 1e-300) continue;
      Polyline np;
      np.vertices.resize(k);
      np.vertices.front() = e.chain.front();
      np.vertices.back() = e.chain.back();
      std::size_t seg = 0;
      for (std::size_t j = 1; j + 1 < k; ++j) {
        const double t = total * double(j) / double(k - 1);
        while (seg + 2 < k && cum[seg + 1] < t) ++seg;
        const double den = cum[seg + 1] - cum[seg];
        const double u = den > 0.0 ? (t - cum[seg]) / den : 0.0;
        np.vertices[j] =
            e.chain[seg] + u * (e.chain[seg + 1] - e.chain[seg]);
      }
      e.chain = np.vertices;
    }
  }

  void push_out_of_disks() {
    for (FilmEdge& e : f.edges) {
      for (std::size_t i = 1; i + 1 < e.chain.size(); ++i) {
        for (const film::Disk& d : f.wire.disks) {
          const Point r = e.chain[i] - d.center;
          const double n = geom::norm(r);
          if (n < d.radius)
            e.chain[i] = d.center + (d.radius / std::max(n, 1e-300)) * r;
        }
      }
    }
  }

  bool chains_embedded() const {
    std::vector<Polyline> ps;
    ps.reserve(f.edges.size());
    for (const FilmEdge& e : f.edges) ps.push_back(film::edge_polyline(e));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (geom::chains_cross(ps[i], ps[i])) return false;
      for (std::size_t j = i + 1; j < ps.size(); ++j)
        if (geom::chains_cross(ps[i], ps[j])) return false;
    }
    return true;
  }
};

std::vector<char> region_edge_mask(const FilmComplex& f) {
  std::vector<char> mask(f.edges.size(), 0);
  for (const film::LiquidRegion& r : f.regions)
    for (const film::OrientedEdge& oe : r.loop)
      mask[std::size_t(oe.edge)] = 1;
  return mask;
}

void resample_film(FilmComplex& f, double target) {
  if (target <= 0.0) return;
  const std::vector<char> in_region = region_edge_mask(f);
  for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
    FilmEdge& e = f.edges[ei];
    const double len = geom::polyline_length(film::edge_polyline(e));
    double spacing = target;
    // Walls and stray edges stay coarse: they converge to segments and
    // fine tangential modes only slow the flow down.
    if (!in_region[ei] || e.multiplicity == 2)
      spacing = std::max(target, len / 24.0);
    const Polyline r = geom::resample(film::edge_polyline(e), spacing);
    e.chain = r.vertices;
    e.chain.front() = f.vertices[std::size_t(e.v0)].position;
    e.chain.back() = f.vertices[std::size_t(e.v1)].position;
  }
}

}  // namespace

std::pair<FilmComplex, film::SolveReport> minimize(const Scenario& s) {
  if (s.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
  {
    const auto bad = film::validate(s.initial);
    if (!bad.empty())
      throw std::invalid_argument("initial film invalid: " + bad.front().code +
                                  " (" + bad.front().detail + ")");
  }
  const double resolution = scenario_resolution(s);
  {
    const auto cert = span::is_spanning(span::film_chains(s.initial), s.wire,
                                        s.spec, resolution);
    if (!cert.spanning)
      throw std::invalid_argument("initial film is not spanning");
  }

  Flow flow;
  flow.f = s.initial;
  flow.f.wire = s.wire;
  flow.cfg = &s.config;
  const auto reset_structure = [&flow, &s]() {
    resample_film(flow.f, s.config.resample_target_edge_length);
    flow.build_paths();
    flow.vertex_movable.assign(flow.f.vertices.size(), 1);
    for (std::size_t vi = 0; vi < flow.f.vertices.size(); ++vi) {
      if (s.config.pinned_anchors &&
          flow.f.vertices[vi].kind == film::VertexKind::anchor)
        flow.vertex_movable[vi] = 0;
    }
  };
  reset_structure();

  double step = s.config.step;
  int halvings = 0;
  int rejection_run = 0;
  int iterations = 0;
  bool converged = false;

  flow.project_volume(s.epsilon, s.config.volume_tolerance);
  double prev_energy = film::relaxed_energy(flow.f);

  const bool trace = std::getenv("CAPFILM_TRACE") != nullptr;
  FilmComplex snapshot = flow.f;
  for (; iterations < s.config.max_iterations; ++iterations) {
    snapshot = flow.f;
    flow.length_gradient();
    const double res = flow.stationarity_residual();
    if (trace && (iterations & 2047) == 0)
      std::fprintf(stderr,
                   "it %7d step %.3e halv %2d res %.3e jres %.3e E %.10f ne %zu\n",
                   iterations, step, halvings, res,
                   junction_residual(flow.f), film::relaxed_energy(flow.f),
                   flow.f.edges.size());
    const double vol = flow.total_area();
    if (res < s.config.gradient_tolerance &&
        std::abs(vol - s.epsilon) < s.config.volume_tolerance) {
      converged = true;
      break;
    }
    const bool stage = trace && std::getenv("CAPFILM_STAGE") != nullptr;
    flow.descend(step);
    const double e_desc = stage ? film::relaxed_energy(flow.f) : 0.0;
    flow.redistribute();
    const double e_redist = stage ? film::relaxed_energy(flow.f) : 0.0;
    flow.project_volume(s.epsilon, s.config.volume_tolerance);
    const double energy = film::relaxed_energy(flow.f);
    if (stage && energy > prev_energy + 1e-12 * (1.0 + prev_energy))
      std::fprintf(stderr,
                   "rej it %d step %.3e dE_desc %+.3e dE_redist %+.3e "
                   "dE_proj %+.3e\n",
                   iterations, step, e_desc - prev_energy, e_redist - e_desc,
                   energy - e_redist);
    if (!std::isfinite(energy) ||
        energy > prev_energy + 1e-12 * (1.0 + prev_energy)) {
      flow.f = snapshot;
      step *= 0.5;
      ++halvings;
      // A run of rejections with no accepted step in between means the
      // state is stuck, not merely stepping too far.
      if (++rejection_run > 60) break;
      continue;
    }
    rejection_run = 0;
    step = std::min(s.config.step, step * 1.02);
    prev_energy = energy;
    if (s.config.collapse_merge_distance > 0.0 && (iterations & 63) == 63) {
      bool merged_now = false;
      try {
        FilmComplex merged =
            collapse_merge(flow.f, s.config.collapse_merge_distance);
        if (merged.edges.size() != flow.f.edges.size()) {
          flow.f = std::move(merged);
          merged_now = true;
        }
      } catch (const std::runtime_error&) {
        // near-merge state not yet consistent; keep flowing
      }
      if (merged_now) {
        reset_structure();
        flow.project_volume(s.epsilon, s.config.volume_tolerance);
        prev_energy = film::relaxed_energy(flow.f);
        step = s.config.step;
        rejection_run = 0;
        if (trace)
          std::fprintf(stderr, "it %7d merge -> ne %zu E %.10f\n", iterations,
                       flow.f.edges.size(), prev_energy);
        continue;
      }
    }
    // Long flows can let chain spacing degenerate as vertices slide
    // tangentially. Resampling also perturbs a settled state, so only
    // re-uniformize when the spacing has actually drifted.
    if ((iterations & 4095) == 4095) {
      const std::vector<char> in_region = region_edge_mask(flow.f);
      bool drifted = false;
      for (std::size_t ei = 0; ei < flow.f.edges.size() && !drifted; ++ei) {
        const FilmEdge& e = flow.f.edges[ei];
        const double len = geom::polyline_length(film::edge_polyline(e));
        if (len < 1e-12) continue;
        double sp = s.config.resample_target_edge_length;
        if (sp <= 0.0) continue;
        if (!in_region[ei] || e.multiplicity == 2)
          sp = std::max(sp, len / 24.0);
        const auto m = std::max<long long>(2, std::llround(len / sp) + 1);
        const double expect = len / double(m - 1);
        for (std::size_t i = 0; i + 1 < e.chain.size(); ++i) {
          const double l = geom::distance(e.chain[i], e.chain[i + 1]);
          if (l < 0.4 * expect || l > 2.5 * expect) {
            drifted = true;
            break;
          }
        }
      }
      if (drifted) {
        reset_structure();
        flow.project_volume(s.epsilon, s.config.volume_tolerance);
        prev_energy = film::relaxed_energy(flow.f);
      }
    }
    if ((iterations & 1023) == 1023 && !flow.chains_embedded())
      throw std::runtime_error("offset not embedded at iteration " +
                               std::to_string(iterations));
  }

  if (!flow.chains_embedded())
    throw std::runtime_error("offset not embedded at iteration " +
                             std::to_string(iterations));
  {
    const auto bad = film::validate(flow.f);
    if (!bad.empty())
      throw std::runtime_error("flow produced invalid film: " +
                               bad.front().code);
  }
  const auto cert =
      span::is_spanning(span::film_chains(flow.f), s.wire, s.spec, resolution);
  if (!cert.spanning)
    throw std::runtime_error("flow exited spanning class");

  film::SolveReport rep;
  rep.energy = film::relaxed_energy(flow.f);
  rep.volume = film::liquid_volume(flow.f);
  if (!flow.f.regions.empty()) {
    const auto [lam, spread] = lambda_estimate(flow.f);
    rep.lambda = lam;
    rep.lambda_spread = spread;
  }
  rep.classification = film::classify(flow.f);
  rep.junction_residual = junction_residual(flow.f);
  rep.spanning_ok = true;
  rep.iterations = iterations;
  rep.converged = converged;
  rep.step_halvings = halvings;
  return {std::move(flow.f), rep};
}

std::pair<double, double> lambda_estimate(const film::FilmComplex& f) {
  if (f.regions.empty())
    throw std::runtime_error("λ undefined without ∂*E");
  const std::vector<int> deg = vertex_degree(f);

  std::vector<double> kept;
  for (const film::LiquidRegion& r : f.regions) {
    const Polyline poly = film::region_polygon(f, r);
    const std::size_t n = poly.vertices.size();
    if (n < 5) continue;
    const geom::ScalarField curv = geom::fit_curvature(poly, 2);

    // Collar: polygon slots at chain endpoints whose film vertex is an
    // anchor or a true junction, widened by two on each side.
    std::vector<char> excluded(n, 0);
    std::size_t slot = 0;
    for (const film::OrientedEdge& oe : r.loop) {
      const FilmEdge& e = f.edges[std::size_t(oe.edge)];
      const std::size_t k = e.chain.size();
      const int vid = oe.forward ? e.v0 : e.v1;
      const FilmVertex& v = f.vertices[std::size_t(vid)];
      const bool cut = v.kind == film::VertexKind::anchor ||
                       deg[std::size_t(vid)] != 2;
      if (cut) {
        for (int o = -2; o <= 2; ++o)
          excluded[(slot + std::size_t(o + int(n))) % n] = 1;
      }
      slot += k - 1;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!excluded[i]) kept.push_back(curv[i]);
  }
  if (kept.empty()) throw std::runtime_error("λ undefined without ∂*E");
  double mean = 0.0;
  for (double c : kept) mean += c;
  mean /= double(kept.size());
  double spread = 0.0;
  for (double c : kept) spread = std::max(spread, std::abs(c - mean));
  return {mean, spread};
}

double junction_residual(const film::FilmComplex& f) {
  const std::vector<int> deg = vertex_degree(f);
  double worst = 0.0;
  for (std::size_t vi = 0; vi < f.vertices.size(); ++vi) {
    if (f.vertices[vi].kind != film::VertexKind::free_junction) continue;
    if (deg[vi] < 3) continue;
    Point acc{0, 0};
    for (const FilmEdge& e : f.edges) {
      if (e.v0 == int(vi))
        acc = acc + double(e.multiplicity) *
                        geom::normalized(e.chain[1] - e.chain[0]);
      if (e.v1 == int(vi))
        acc = acc + double(e.multiplicity) *
                        geom::normalized(e.chain[e.chain.size() - 2] -
                                         e.chain.back());
    }
    worst = std::max(worst, geom::norm(acc));
  }
  return worst;
}

namespace {

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

// Chain of edge ei oriented to start at vertex tip.
std::vector<Point> oriented_chain(const FilmComplex& f, int ei, int tip) {
  std::vector<Point> pts = f.edges[std::size_t(ei)].chain;
  if (f.edges[std::size_t(ei)].v0 != tip) std::reverse(pts.begin(), pts.end());
  return pts;
}

void split_at(const std::vector<Point>& pts, const std::vector<double>& cum,
              double s, std::vector<Point>& head, std::vector<Point>& tail) {
  head.clear();
  tail.clear();
  const Point q = point_at(pts, cum, s);
  std::size_t i = 1;
  while (i < cum.size() && cum[i] < s) ++i;
  head.assign(pts.begin(), pts.begin() + long(i));
  if (geom::distance(head.back(), q) > 1e-12) head.push_back(q);
  tail.push_back(q);
  for (std::size_t j = i; j < pts.size(); ++j) {
    if (geom::distance(tail.back(), pts[j]) > 1e-12) tail.push_back(pts[j]);
  }
}

struct MergePlan {
  int e1 = -1, e2 = -1, tip = -1;
  double s_star = 0.0;
};

bool find_tip_merge(const FilmComplex& f, double d, MergePlan& plan) {
  for (std::size_t vi = 0; vi < f.vertices.size(); ++vi) {
    // A free tip whose forces balance is an equilibrated junction whose
    // walls meet tangentially, not a wedge mid-collapse. Biting it
    // would push a doubled stub into the region that the flow then has
    // to retract.
    if (f.vertices[vi].kind == film::VertexKind::free_junction) {
      Point acc{0, 0};
      for (const FilmEdge& e : f.edges) {
        if (e.chain.size() < 2) continue;
        if (e.v0 == int(vi))
          acc = acc + double(e.multiplicity) *
                          geom::normalized(e.chain[1] - e.chain[0]);
        if (e.v1 == int(vi))
          acc = acc + double(e.multiplicity) *
                          geom::normalized(e.chain[e.chain.size() - 2] -
                                           e.chain.back());
      }
      if (geom::norm(acc) < 0.02) continue;
    }
    std::vector<int> incident;
    for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
      const FilmEdge& e = f.edges[ei];
      if (e.multiplicity != 1) continue;
      if (e.v0 == int(vi) || e.v1 == int(vi)) incident.push_back(int(ei));
    }
    for (std::size_t a = 0; a < incident.size(); ++a) {
      for (std::size_t b = a + 1; b < incident.size(); ++b) {
        const auto c1 = oriented_chain(f, incident[a], int(vi));
        const auto c2 = oriented_chain(f, incident[b], int(vi));
        const auto s1 = cumulative(c1);
        const auto s2 = cumulative(c2);
        const double cap = 0.9 * std::min(s1.back(), s2.back());
        std::vector<double> samples;
        for (double v : s1)
          if (v > 0 && v < cap) samples.push_back(v);
        for (double v : s2)
          if (v > 0 && v < cap) samples.push_back(v);
        samples.push_back(cap);
        std::sort(samples.begin(), samples.end());
        double s_star = 0.0;
        for (double sv : samples) {
          if (geom::distance(point_at(c1, s1, sv), point_at(c2, s2, sv)) <= d)
            s_star = sv;
          else
            break;
        }
        const double spacing = s1.back() / double(c1.size() - 1);
        if (s_star >= std::max(3.0 * d, 2.0 * spacing)) {
          plan.e1 = incident[a];
          plan.e2 = incident[b];
          plan.tip = int(vi);
          plan.s_star = s_star;
          return true;
        }
      }
    }
  }
  return false;
}

void apply_tip_merge(FilmComplex& f, const MergePlan& plan) {
  const auto c1 = oriented_chain(f, plan.e1, plan.tip);
  const auto c2 = oriented_chain(f, plan.e2, plan.tip);
  const auto s1 = cumulative(c1);
  const auto s2 = cumulative(c2);

  std::vector<Point> head1, tail1, head2, tail2;
  split_at(c1, s1, plan.s_star, head1, tail1);
  split_at(c2, s2, plan.s_star, head2, tail2);

  const Point jpos = 0.5 * (tail1.front() + tail2.front());
  film::FilmVertex jv;
  jv.position = jpos;
  jv.kind = film::VertexKind::free_junction;
  const int jid = int(f.vertices.size());
  f.vertices.push_back(jv);

  // Midcurve from the tip to the new junction, multiplicity 2.
  std::vector<double> ss;
  for (double v : s1)
    if (v < plan.s_star) ss.push_back(v);
  for (double v : s2)
    if (v < plan.s_star) ss.push_back(v);
  ss.push_back(plan.s_star);
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           ss.end());
  std::vector<Point> mid;
  for (double sv : ss) {
    const Point q = 0.5 * (point_at(c1, s1, sv) + point_at(c2, s2, sv));
    if (mid.empty() || geom::distance(mid.back(), q) > 1e-12) mid.push_back(q);
  }
  if (geom::distance(mid.back(), jpos) > 1e-12) mid.push_back(jpos);
  mid.front() = f.vertices[std::size_t(plan.tip)].position;

  const int far1 = f.edges[std::size_t(plan.e1)].v0 == plan.tip
                       ? f.edges[std::size_t(plan.e1)].v1
                       : f.edges[std::size_t(plan.e1)].v0;
  const int far2 = f.edges[std::size_t(plan.e2)].v0 == plan.tip
                       ? f.edges[std::size_t(plan.e2)].v1
                       : f.edges[std::size_t(plan.e2)].v0;

  // Remainder chains run junction -> far end; region refs keep edge
  // slots e1/e2 so loops stay intact.
  tail1.front() = jpos;
  tail2.front() = jpos;
  {
    FilmEdge& e = f.edges[std::size_t(plan.e1)];
    const bool fwd = e.v0 == plan.tip;
    e.v0 = fwd ? jid : far1;
    e.v1 = fwd ? far1 : jid;
    e.chain = tail1;
    if (!fwd) std::reverse(e.chain.begin(), e.chain.end());
  }
  {
    FilmEdge& e = f.edges[std::size_t(plan.e2)];
    const bool fwd = e.v0 == plan.tip;
    e.v0 = fwd ? jid : far2;
    e.v1 = fwd ? far2 : jid;
    e.chain = tail2;
    if (!fwd) std::reverse(e.chain.begin(), e.chain.end());
  }

  FilmEdge m;
  m.v0 = plan.tip;
  m.v1 = jid;
  m.multiplicity = 2;
  m.chain = mid;
  f.edges.push_back(m);
}

bool find_parallel_merge(const FilmComplex& f, double d, int& out1, int& out2) {
  for (std::size_t i = 0; i < f.edges.size(); ++i) {
    const FilmEdge& e1 = f.edges[i];
    if (e1.multiplicity != 1) continue;
    for (std::size_t j = i + 1; j < f.edges.size(); ++j) {
      const FilmEdge& e2 = f.edges[j];
      if (e2.multiplicity != 1) continue;
      // Walls that bound a common region hold liquid between them and
      // must not be flattened onto each other.
      bool share_region = false;
      for (const film::LiquidRegion& r : f.regions) {
        bool has1 = false, has2 = false;
        for (const film::OrientedEdge& oe : r.loop) {
          if (oe.edge == int(i)) has1 = true;
          if (oe.edge == int(j)) has2 = true;
        }
        if (has1 && has2) share_region = true;
      }
      if (share_region) continue;
      const auto c1 = e1.chain;
      auto c2 = e2.chain;
      std::reverse(c2.begin(), c2.end());
      const auto s1 = cumulative(c1);
      auto s2 = cumulative(c2);
      if (s1.back() < 1e-12 || s2.back() < 1e-12) continue;
      bool within = true;
      const int samples = 16;
      for (int k = 0; k <= samples && within; ++k) {
        const double u = double(k) / samples;
        if (geom::distance(point_at(c1, s1, u * s1.back()),
                           point_at(c2, s2, u * s2.back())) > d)
          within = false;
      }
      if (within) {
        out1 = int(i);
        out2 = int(j);
        return true;
      }
    }
  }
  return false;
}

void apply_parallel_merge(FilmComplex& f, int i1, int i2) {
  FilmEdge e1 = f.edges[std::size_t(i1)];
  FilmEdge e2 = f.edges[std::size_t(i2)];
  std::vector<Point> c2 = e2.chain;
  std::reverse(c2.begin(), c2.end());
  const auto s1 = cumulative(e1.chain);
  const auto s2 = cumulative(c2);

  std::vector<double> us;
  for (double v : s1) us.push_back(v / s1.back());
  for (double v : s2) us.push_back(v / s2.back());
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-9; }),
           us.end());
  std::vector<Point> mid;
  for (double u : us) {
    const Point q = 0.5 * (point_at(e1.chain, s1, u * s1.back()) +
                           point_at(c2, s2, u * s2.back()));
    if (mid.empty() || geom::distance(mid.back(), q) > 1e-12) mid.push_back(q);
  }

  const int a1 = e1.v0, b1 = e1.v1;
  const int a2 = e2.v1, b2 = e2.v0;  // reversed pairing
  f.vertices[std::size_t(a1)].position = mid.front();
  f.vertices[std::size_t(b1)].position = mid.back();
  f.vertices[std::size_t(a1)].kind = film::VertexKind::free_junction;
  f.vertices[std::size_t(b1)].kind = film::VertexKind::free_junction;
  f.vertices[std::size_t(a1)].disk = -1;
  f.vertices[std::size_t(b1)].disk = -1;

  // Re-point everything at the absorbed endpoints of e2.
  for (FilmEdge& e : f.edges) {
    if (e.v0 == a2) e.v0 = a1;
    if (e.v1 == a2) e.v1 = a1;
    if (e.v0 == b2) e.v0 = b1;
    if (e.v1 == b2) e.v1 = b1;
  }

  FilmEdge m;
  m.v0 = a1;
  m.v1 = b1;
  m.multiplicity = 2;
  m.chain = std::move(mid);

  std::vector<FilmEdge> kept;
  for (std::size_t k = 0; k < f.edges.size(); ++k) {
    if (int(k) == i1 || int(k) == i2) continue;
    kept.push_back(f.edges[k]);
  }
  // Region loops referencing the merged pair cannot survive; leave the
  // indices dangling so validation rejects and the caller rolls back.
  std::vector<int> remap(f.edges.size(), -1);
  {
    int next = 0;
    for (std::size_t k = 0; k < f.edges.size(); ++k) {
      if (int(k) == i1 || int(k) == i2) continue;
      remap[k] = next++;
    }
  }
  for (film::LiquidRegion& r : f.regions)
    for (film::OrientedEdge& oe : r.loop)
      oe.edge = oe.edge >= 0 && remap[std::size_t(oe.edge)] >= 0
                    ? remap[std::size_t(oe.edge)]
                    : int(kept.size()) + 1000;
  f.edges = std::move(kept);
  f.edges.push_back(m);
  for (FilmEdge& e : f.edges) {
    e.chain.front() = f.vertices[std::size_t(e.v0)].position;
    e.chain.back() = f.vertices[std::size_t(e.v1)].position;
  }
}

// Contracts one doubled connector that has shrunk far below the merge
// scale, welding its endpoints into a single junction. A near-zero
// doubled segment exerts a unit-magnitude pull in a noise direction
// and pins the flow in a nonsmooth trap.
bool weld_short_stub(FilmComplex& f, double d) {
  for (std::size_t ei = 0; ei < f.edges.size(); ++ei) {
    const FilmEdge& e = f.edges[ei];
    if (e.multiplicity != 2) continue;
    if (e.v0 == e.v1) continue;
    if (geom::polyline_length(film::edge_polyline(e)) >= 0.25 * d) continue;
    const film::FilmVertex& va = f.vertices[std::size_t(e.v0)];
    const film::FilmVertex& vb = f.vertices[std::size_t(e.v1)];
    if (va.kind != film::VertexKind::free_junction ||
        vb.kind != film::VertexKind::free_junction)
      continue;
    bool on_loop = false;
    for (const film::LiquidRegion& r : f.regions)
      for (const film::OrientedEdge& oe : r.loop)
        if (oe.edge == int(ei)) on_loop = true;
    if (on_loop) continue;

    const int keep = e.v0, drop = e.v1;
    f.vertices[std::size_t(keep)].position =
        0.5 * (va.position + vb.position);
    for (FilmEdge& o : f.edges) {
      if (o.v0 == drop) o.v0 = keep;
      if (o.v1 == drop) o.v1 = keep;
    }
    std::vector<int> remap(f.edges.size(), -1);
    {
      int next = 0;
      for (std::size_t k = 0; k < f.edges.size(); ++k) {
        if (k == ei) continue;
        remap[k] = next++;
      }
    }
    std::vector<FilmEdge> kept;
    kept.reserve(f.edges.size() - 1);
    for (std::size_t k = 0; k < f.edges.size(); ++k)
      if (k != ei) kept.push_back(std::move(f.edges[k]));
    for (film::LiquidRegion& r : f.regions)
      for (film::OrientedEdge& oe : r.loop)
        oe.edge = remap[std::size_t(oe.edge)];
    f.edges = std::move(kept);
    for (FilmEdge& o : f.edges) {
      o.chain.front() = f.vertices[std::size_t(o.v0)].position;
      o.chain.back() = f.vertices[std::size_t(o.v1)].position;
    }
    return true;
  }
  return false;
}

}  // namespace

film::FilmComplex collapse_merge(const film::FilmComplex& f0, double d) {
  if (d <= 0.0) return f0;
  FilmComplex f = f0;
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 16) {
    changed = false;
    if (weld_short_stub(f, d)) {
      changed = true;
      continue;
    }
    MergePlan plan;
    if (find_tip_merge(f, d, plan)) {
      apply_tip_merge(f, plan);
      changed = true;
      continue;
    }
    int i1 = -1, i2 = -1;
    if (find_parallel_merge(f, d, i1, i2)) {
      apply_parallel_merge(f, i1, i2);
      changed = true;
    }
  }
  if (changed) throw std::runtime_error("merge did not stabilize");
  const auto bad = film::validate(f);
  if (!bad.empty()) throw std::runtime_error("merge would disconnect a region");
  return f;
}

}  // namespace capfilm::solve
