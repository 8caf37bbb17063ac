#pragma once

#include <cstddef>
#include <vector>

#include "capfilm/film_complex.hpp"
#include "capfilm/geometry.hpp"

namespace capfilm::span {

// A winding class is one integer per wireframe disk, not all zero.
struct SpanningSpec {
  std::vector<std::vector<int>> classes;
};

struct SpanningCertificate {
  bool spanning = false;
  double resolution = 0.0;
  std::size_t grid_nodes = 0;
  std::size_t cover_states = 0;
  // Set only when spanning is false: a grid loop that avoids the network
  // and realizes one of the requested classes.
  std::vector<int> witness_class;
  geom::Polyline witness;
};

// Winding number of a closed loop around each disk center, by summed
// signed angle. The loop must avoid every closed disk.
std::vector<int> winding_vector(const geom::Polyline& loop,
                                const film::WireFrame& wire);

// Decides whether the network blocks every loop class in the spec.
// Searches the abelian cover of a grid graph on the free part of the
// plane (nodes farther than resolution/2 from the network and the
// disks), with winding coordinates truncated to the range spanned by
// the spec plus one.
SpanningCertificate is_spanning(const std::vector<geom::Polyline>& network,
                                const film::WireFrame& wire,
                                const SpanningSpec& spec, double resolution);

// All edge chains of a film complex, for spanning checks.
std::vector<geom::Polyline> film_chains(const film::FilmComplex& f);

// Default grid resolution for a frame: smallest feature over 20.
double default_resolution(const film::WireFrame& wire);

// Minimal-length spanning network over an enumerated Steiner family
// (anchor-to-anchor segments, single-point stars, and the two-point
// trees on four disks). All edges multiplicity 1, no regions.
struct SteinerResult {
  double length = 0.0;
  film::FilmComplex network;
};

SteinerResult steiner_baseline(const film::WireFrame& wire,
                               const SpanningSpec& spec);
SteinerResult steiner_baseline(const film::WireFrame& wire,
                               const SpanningSpec& spec, double resolution);

}  // namespace capfilm::span
