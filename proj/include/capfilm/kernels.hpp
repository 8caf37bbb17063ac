#pragma once

#include <cstddef>

namespace capfilm::kernels {

// Arithmetic inner loops over interleaved coordinate arrays (x0,y0,x1,y1,...).
// Every kernel has a scalar reference implementation; on x86-64 an AVX2
// variant is selected at startup when the CPU supports it.  Set
// CAPFILM_KERNELS=scalar or CAPFILM_KERNELS=avx2 to force a lane.
//
// The AVX2 kernels accumulate in a fixed lane order, so for a given input and
// a given lane the result is reproducible run to run.
struct Ops {
  const char* name;

  // Sum of segment lengths of the chain of n points; adds the closing
  // segment when closed is true.
  double (*chain_length)(const double* xy, std::size_t n, bool closed);

  // Twice the signed area of the closed polygon (shoelace sum).
  double (*shoelace2)(const double* xy, std::size_t n);

  // Minimum squared distance from (px,py) to the segments of the chain.
  // A single-point chain degenerates to point-point distance.
  double (*min_sqdist_point_chain)(double px, double py, const double* xy,
                                   std::size_t n, bool closed);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();  // only valid when avx2_available()
const Ops& active();

}  // namespace capfilm::kernels
