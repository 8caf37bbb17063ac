#include "capfilm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace capfilm::kernels {
namespace {

double chain_length_scalar(const double* xy, std::size_t n, bool closed) {
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dx = xy[2 * i + 2] - xy[2 * i];
    const double dy = xy[2 * i + 3] - xy[2 * i + 1];
    acc += std::sqrt(dx * dx + dy * dy);
  }
  if (closed) {
    const double dx = xy[0] - xy[2 * n - 2];
    const double dy = xy[1] - xy[2 * n - 1];
    acc += std::sqrt(dx * dx + dy * dy);
  }
  return acc;
}

double shoelace2_scalar(const double* xy, std::size_t n) {
  if (n < 3) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += xy[2 * i] * xy[2 * i + 3] - xy[2 * i + 1] * xy[2 * i + 2];
  }
  acc += xy[2 * n - 2] * xy[1] - xy[2 * n - 1] * xy[0];
  return acc;
}

inline double seg_sqdist(double px, double py, double ax, double ay, double bx,
                         double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double apx = px - ax;
  const double apy = py - ay;
  const double len2 = std::max(dx * dx + dy * dy, 1e-300);
  const double t = std::clamp((apx * dx + apy * dy) / len2, 0.0, 1.0);
  const double ex = apx - t * dx;
  const double ey = apy - t * dy;
  return ex * ex + ey * ey;
}

double min_sqdist_scalar(double px, double py, const double* xy, std::size_t n,
                         bool closed) {
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) {
    const double ex = px - xy[0];
    const double ey = py - xy[1];
    return ex * ex + ey * ey;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    best = std::min(best, seg_sqdist(px, py, xy[2 * i], xy[2 * i + 1],
                                     xy[2 * i + 2], xy[2 * i + 3]));
  }
  if (closed) {
    best = std::min(best, seg_sqdist(px, py, xy[2 * n - 2], xy[2 * n - 1],
                                     xy[0], xy[1]));
  }
  return best;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar", chain_length_scalar, shoelace2_scalar,
                       min_sqdist_scalar};
  return ops;
}

}  // namespace capfilm::kernels
