#pragma once

#include <cstdint>
#include <utility>

#include "capfilm/film_complex.hpp"
#include "capfilm/spanning.hpp"

namespace capfilm::solve {

struct SolveConfig {
  double step = 0.1;
  int max_iterations = 200000;
  double gradient_tolerance = 1e-8;
  double volume_tolerance = 1e-11;
  double collapse_merge_distance = 0.0;
  double resample_target_edge_length = 0.0125;
  // Scenario flag: freeze anchors instead of letting them slide on
  // their circles.
  bool pinned_anchors = false;
};

struct Scenario {
  film::WireFrame wire;
  span::SpanningSpec spec;
  double epsilon = 0.0;
  film::FilmComplex initial;
  SolveConfig config;
  std::uint64_t seed = 0;
  double resolution = 0.0;  // 0 selects default_resolution(wire)
};

double scenario_resolution(const Scenario& s);

// Projected-gradient descent on vertex positions under the area
// constraint. Anchors slide along their circles, junctions move
// freely, and after each step the region boundaries are shifted
// uniformly along their normals until the enclosed area matches
// epsilon again.
std::pair<film::FilmComplex, film::SolveReport> minimize(const Scenario& s);

// Mean discrete curvature over multiplicity-1 region boundary
// vertices, skipping a two-vertex collar at junctions and anchors.
// Returns (lambda, max deviation from the mean).
std::pair<double, double> lambda_estimate(const film::FilmComplex& f);

// Max over junction vertices of |sum of multiplicity-weighted unit
// tangents pointing away from the vertex|.
double junction_residual(const film::FilmComplex& f);

// Merges opposite multiplicity-1 arcs lying within distance d of each
// other into multiplicity-2 midcurves: whole parallel edges, and
// prefixes of edge pairs sharing a tip vertex.
film::FilmComplex collapse_merge(const film::FilmComplex& f, double d);

}  // namespace capfilm::solve
