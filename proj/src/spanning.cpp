#include "capfilm/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace capfilm::span {

using geom::Point;
using geom::Polyline;

std::vector<int> winding_vector(const Polyline& loop,
                                const film::WireFrame& wire) {
  if (!loop.closed || loop.vertices.size() < 3)
    throw std::invalid_argument("winding_vector needs a closed loop");
  for (const film::Disk& d : wire.disks) {
    if (geom::min_distance(d.center, loop) <= d.radius)
      throw std::runtime_error("loop touches a disk");
  }
  std::vector<int> out;
  out.reserve(wire.disks.size());
  const auto& v = loop.vertices;
  for (const film::Disk& d : wire.disks) {
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point a = v[i] - d.center;
      const Point b = v[(i + 1) % v.size()] - d.center;
      total += std::atan2(geom::cross(a, b), geom::dot(a, b));
    }
    out.push_back(int(std::lround(total / (2.0 * M_PI))));
  }
  return out;
}

std::vector<Polyline> film_chains(const film::FilmComplex& f) {
  std::vector<Polyline> out;
  out.reserve(f.edges.size());
  for (const film::FilmEdge& e : f.edges) out.push_back(film::edge_polyline(e));
  return out;
}

double default_resolution(const film::WireFrame& wire) {
  double feature = std::numeric_limits<double>::infinity();
  for (const film::Disk& d : wire.disks) feature = std::min(feature, d.radius);
  for (std::size_t i = 0; i < wire.disks.size(); ++i) {
    for (std::size_t j = i + 1; j < wire.disks.size(); ++j) {
      const double gap = geom::distance(wire.disks[i].center,
                                        wire.disks[j].center) -
                         wire.disks[i].radius - wire.disks[j].radius;
      feature = std::min(feature, gap);
    }
  }
  return feature / 20.0;
}

namespace {

double min_feature(const film::WireFrame& wire) {
  return 20.0 * default_resolution(wire);
}

void check_spec(const film::WireFrame& wire, const SpanningSpec& spec) {
  if (spec.classes.empty())
    throw std::invalid_argument("spanning spec empty");
  for (const auto& v : spec.classes) {
    if (v.size() != wire.disks.size())
      throw std::invalid_argument("winding class length mismatch");
    if (std::all_of(v.begin(), v.end(), [](int k) { return k == 0; }))
      throw std::invalid_argument("winding class must be nonzero");
  }
}

struct CoverCode {
  std::vector<int> bound;    // truncation per disk
  std::vector<int> stride;
  int states = 1;

  explicit CoverCode(const SpanningSpec& spec, std::size_t disks) {
    bound.assign(disks, 1);
    for (const auto& v : spec.classes) {
      for (std::size_t i = 0; i < disks; ++i)
        bound[i] = std::max(bound[i], std::abs(v[i]) + 1);
    }
    stride.assign(disks, 1);
    for (std::size_t i = 0; i < disks; ++i) {
      stride[i] = states;
      states *= 2 * bound[i] + 1;
    }
  }

  int encode(const std::vector<int>& v) const {
    int code = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      code += (v[i] + bound[i]) * stride[i];
    return code;
  }
};

}  // namespace

SpanningCertificate is_spanning(const std::vector<Polyline>& network,
                                const film::WireFrame& wire,
                                const SpanningSpec& spec, double resolution) {
  if (resolution <= 0.0)
    throw std::invalid_argument("resolution must be positive");
  check_spec(wire, spec);
  if (resolution >= 0.5 * min_feature(wire))
    throw std::runtime_error("resolution too coarse");

  const double res = resolution;
  const std::size_t nd = wire.disks.size();

  double lox = std::numeric_limits<double>::infinity(), loy = lox;
  double hix = -lox, hiy = -lox;
  auto take = [&](Point p) {
    lox = std::min(lox, p.x);
    loy = std::min(loy, p.y);
    hix = std::max(hix, p.x);
    hiy = std::max(hiy, p.y);
  };
  for (const film::Disk& d : wire.disks) {
    take({d.center.x - d.radius, d.center.y - d.radius});
    take({d.center.x + d.radius, d.center.y + d.radius});
  }
  for (const Polyline& c : network)
    for (const Point& p : c.vertices) take(p);

  const double pad = 4.0 * res;
  // Irrational-ish offset keeps grid lines off disk centers, so grid
  // edges never run along a winding cut.
  const double x0 = lox - pad + 0.30902 * res;
  const double y0 = loy - pad + 0.19098 * res;
  const int nx = int(std::ceil((hix + pad - x0) / res)) + 1;
  const int ny = int(std::ceil((hiy + pad - y0) / res)) + 1;
  const std::size_t nodes = std::size_t(nx) * std::size_t(ny);

  auto node_pos = [&](int ix, int iy) {
    return Point{x0 + ix * res, y0 + iy * res};
  };

  std::vector<uint8_t> free_node(nodes, 0);
  std::size_t free_count = 0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Point p = node_pos(ix, iy);
      bool ok = true;
      for (const film::Disk& d : wire.disks) {
        if (geom::distance(p, d.center) - d.radius <= 0.5 * res) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (const Polyline& c : network) {
          if (geom::min_distance(p, c) <= 0.5 * res) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        free_node[std::size_t(iy) * nx + ix] = 1;
        ++free_count;
      }
    }
  }

  SpanningCertificate cert;
  cert.resolution = res;
  cert.grid_nodes = free_count;

  // Winding cuts: vertical rays downward from each disk center. A
  // horizontal grid edge below a center and straddling its x picks up
  // ±1 on that coordinate.
  std::vector<std::vector<std::pair<int, double>>> col_cuts(
      std::size_t(std::max(nx - 1, 0)));
  for (std::size_t di = 0; di < nd; ++di) {
    const Point c = wire.disks[di].center;
    const int ix = int(std::floor((c.x - x0) / res));
    if (ix >= 0 && ix < nx - 1)
      col_cuts[std::size_t(ix)].push_back({int(di), c.y});
  }

  const CoverCode cover(spec, nd);
  cert.cover_states = free_count * std::size_t(cover.states);

  std::vector<int> target_code(spec.classes.size());
  for (std::size_t i = 0; i < spec.classes.size(); ++i)
    target_code[i] = cover.encode(spec.classes[i]);
  const int zero_code = cover.encode(std::vector<int>(nd, 0));

  // Connected components of the free grid.
  std::vector<int32_t> comp(nodes, -1);
  std::vector<std::size_t> reps;
  {
    std::vector<std::size_t> stack;
    for (std::size_t n = 0; n < nodes; ++n) {
      if (!free_node[n] || comp[n] >= 0) continue;
      const int32_t id = int32_t(reps.size());
      reps.push_back(n);
      comp[n] = id;
      stack.push_back(n);
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        const int ix = int(cur % nx), iy = int(cur / nx);
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int jx = ix + dx[k], jy = iy + dy[k];
          if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
          const std::size_t nb = std::size_t(jy) * nx + jx;
          if (free_node[nb] && comp[nb] < 0) {
            comp[nb] = id;
            stack.push_back(nb);
          }
        }
      }
    }
  }

  const std::size_t states = nodes * std::size_t(cover.states);
  std::vector<int32_t> stamp(states, -1);
  std::vector<int64_t> parent(states, -1);
  std::vector<int> wind(nd);

  for (std::size_t ci = 0; ci < reps.size(); ++ci) {
    const std::size_t rep = reps[ci];
    const int64_t start = int64_t(rep) * cover.states + zero_code;
    stamp[std::size_t(start)] = int32_t(ci);
    parent[std::size_t(start)] = start;
    std::vector<int64_t> queue{start};
    std::size_t head = 0;
    int64_t found = -1;
    std::size_t found_class = 0;
    while (head < queue.size() && found < 0) {
      const int64_t s = queue[head++];
      const std::size_t node = std::size_t(s) / cover.states;
      const int code = int(std::size_t(s) % cover.states);
      if (node == rep) {
        for (std::size_t ti = 0; ti < target_code.size(); ++ti) {
          if (code == target_code[ti]) {
            found = s;
            found_class = ti;
            break;
          }
        }
        if (found >= 0) break;
      }
      const int ix = int(node % nx), iy = int(node / nx);
      {
        int c = code;
        for (std::size_t i = 0; i < nd; ++i) {
          wind[i] = c % (2 * cover.bound[i] + 1) - cover.bound[i];
          c /= 2 * cover.bound[i] + 1;
        }
      }
      const int dx[4] = {1, -1, 0, 0};
      const int dy[4] = {0, 0, 1, -1};
      const double py = node_pos(ix, iy).y;
      for (int k = 0; k < 4; ++k) {
        const int jx = ix + dx[k], jy = iy + dy[k];
        if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
        const std::size_t nb = std::size_t(jy) * nx + jx;
        if (!free_node[nb]) continue;
        int ncode = code;
        if (dx[k] != 0) {
          const int col = dx[k] > 0 ? ix : jx;
          bool blocked = false;
          for (const auto& [di, cy] : col_cuts[std::size_t(col)]) {
            if (py >= cy) continue;
            const int nv = wind[std::size_t(di)] + dx[k];
            if (std::abs(nv) > cover.bound[std::size_t(di)]) {
              blocked = true;
              break;
            }
            ncode += dx[k] * cover.stride[std::size_t(di)];
          }
          if (blocked) continue;
        }
        const int64_t ns = int64_t(nb) * cover.states + ncode;
        if (stamp[std::size_t(ns)] == int32_t(ci)) continue;
        stamp[std::size_t(ns)] = int32_t(ci);
        parent[std::size_t(ns)] = s;
        queue.push_back(ns);
      }
    }
    if (found >= 0) {
      cert.spanning = false;
      cert.witness_class = spec.classes[found_class];
      std::vector<Point> path;
      for (int64_t s = found; ; s = parent[std::size_t(s)]) {
        const std::size_t node = std::size_t(s) / cover.states;
        path.push_back(node_pos(int(node % nx), int(node / nx)));
        if (s == start) break;
      }
      std::reverse(path.begin(), path.end());
      path.pop_back();  // drop repeated base point
      cert.witness = Polyline{std::move(path), true};
      return cert;
    }
  }

  cert.spanning = true;
  return cert;
}

}  // namespace capfilm::span
