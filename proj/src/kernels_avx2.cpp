#include "capfilm/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

// AVX2 lane.  Four segments per iteration; accumulator lanes are reduced in a
// fixed order so repeated runs produce identical bits.

namespace capfilm::kernels {
namespace {

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

inline double reduce_add(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return ((lane[0] + lane[1]) + lane[2]) + lane[3];
}

inline double reduce_min(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return std::min(std::min(lane[0], lane[1]), std::min(lane[2], lane[3]));
}

double chain_length_avx2(const double* xy, std::size_t n, bool closed) {
  if (n < 2) return 0.0;
  const std::size_t nseg = n - 1;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= nseg; i += 4) {
    // Points i..i+1 and i+2..i+3, then the same shifted by one point.
    const __m256d a = _mm256_loadu_pd(xy + 2 * i);
    const __m256d b = _mm256_loadu_pd(xy + 2 * i + 4);
    const __m256d an = _mm256_loadu_pd(xy + 2 * i + 2);
    const __m256d bn = _mm256_loadu_pd(xy + 2 * i + 6);
    const __m256d d0 = _mm256_sub_pd(an, a);  // dx_i dy_i dx_i+1 dy_i+1
    const __m256d d1 = _mm256_sub_pd(bn, b);  // dx_i+2 ... dy_i+3
    const __m256d s0 = _mm256_mul_pd(d0, d0);
    const __m256d s1 = _mm256_mul_pd(d1, d1);
    // hadd yields [L_i, L_i+2, L_i+1, L_i+3]; the permutation is fixed, so
    // the accumulation order is deterministic.
    const __m256d len2 = _mm256_hadd_pd(s0, s1);
    acc = _mm256_add_pd(acc, _mm256_sqrt_pd(len2));
  }
  double tail = 0.0;
  for (; i < nseg; ++i) {
    const double dx = xy[2 * i + 2] - xy[2 * i];
    const double dy = xy[2 * i + 3] - xy[2 * i + 1];
    tail += std::sqrt(dx * dx + dy * dy);
  }
  if (closed) {
    const double dx = xy[0] - xy[2 * n - 2];
    const double dy = xy[1] - xy[2 * n - 1];
    tail += std::sqrt(dx * dx + dy * dy);
  }
  return reduce_add(acc) + tail;
}

double shoelace2_avx2(const double* xy, std::size_t n) {
  if (n < 3) return 0.0;
  const std::size_t nseg = n - 1;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= nseg; i += 4) {
    const __m256d a = _mm256_loadu_pd(xy + 2 * i);      // x_i y_i x_i+1 y_i+1
    const __m256d b = _mm256_loadu_pd(xy + 2 * i + 4);
    const __m256d an = _mm256_loadu_pd(xy + 2 * i + 2);
    const __m256d bn = _mm256_loadu_pd(xy + 2 * i + 6);
    // Swap x/y within each 128-bit pair: (y_i+1, x_i+1, y_i+2, x_i+2).
    const __m256d ans = _mm256_permute_pd(an, 0x5);
    const __m256d bns = _mm256_permute_pd(bn, 0x5);
    const __m256d t0 = _mm256_mul_pd(a, ans);  // x_i*y_i+1, y_i*x_i+1, ...
    const __m256d t1 = _mm256_mul_pd(b, bns);
    acc = _mm256_add_pd(acc, _mm256_hsub_pd(t0, t1));
  }
  double tail = 0.0;
  for (; i < nseg; ++i) {
    tail += xy[2 * i] * xy[2 * i + 3] - xy[2 * i + 1] * xy[2 * i + 2];
  }
  tail += xy[2 * n - 2] * xy[1] - xy[2 * n - 1] * xy[0];
  return reduce_add(acc) + tail;
}

double min_sqdist_avx2(double px, double py, const double* xy, std::size_t n,
                       bool closed) {
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) {
    const double ex = px - xy[0];
    const double ey = py - xy[1];
    return ex * ex + ey * ey;
  }
  const std::size_t nseg = n - 1;
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d tiny = _mm256_set1_pd(1e-300);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= nseg; i += 4) {
    const __m256d c0 = _mm256_loadu_pd(xy + 2 * i);
    const __m256d c1 = _mm256_loadu_pd(xy + 2 * i + 4);
    const __m256d n0 = _mm256_loadu_pd(xy + 2 * i + 2);
    const __m256d n1 = _mm256_loadu_pd(xy + 2 * i + 6);
    // Deinterleave into lanes (i, i+2, i+1, i+3); every vector below uses the
    // same lane permutation so results stay lane-consistent.
    const __m256d ax = _mm256_unpacklo_pd(c0, c1);
    const __m256d ay = _mm256_unpackhi_pd(c0, c1);
    const __m256d bx = _mm256_unpacklo_pd(n0, n1);
    const __m256d by = _mm256_unpackhi_pd(n0, n1);
    const __m256d dx = _mm256_sub_pd(bx, ax);
    const __m256d dy = _mm256_sub_pd(by, ay);
    const __m256d apx = _mm256_sub_pd(vpx, ax);
    const __m256d apy = _mm256_sub_pd(vpy, ay);
    const __m256d len2 =
        _mm256_max_pd(_mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)), tiny);
    const __m256d dot = _mm256_fmadd_pd(apx, dx, _mm256_mul_pd(apy, dy));
    const __m256d t = _mm256_max_pd(
        zero, _mm256_min_pd(one, _mm256_div_pd(dot, len2)));
    const __m256d ex = _mm256_fnmadd_pd(t, dx, apx);
    const __m256d ey = _mm256_fnmadd_pd(t, dy, apy);
    const __m256d d2 = _mm256_fmadd_pd(ex, ex, _mm256_mul_pd(ey, ey));
    best = _mm256_min_pd(best, d2);
  }
  double tail = std::numeric_limits<double>::infinity();
  for (; i < nseg; ++i) {
    tail = std::min(tail, seg_sqdist(px, py, xy[2 * i], xy[2 * i + 1],
                                     xy[2 * i + 2], xy[2 * i + 3]));
  }
  if (closed) {
    tail = std::min(tail, seg_sqdist(px, py, xy[2 * n - 2], xy[2 * n - 1],
                                     xy[0], xy[1]));
  }
  return std::min(reduce_min(best), tail);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{"avx2", chain_length_avx2, shoelace2_avx2,
                       min_sqdist_avx2};
  return ops;
}

}  // namespace capfilm::kernels
