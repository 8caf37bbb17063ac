#pragma once

#include <vector>

#include "capfilm/film_complex.hpp"
#include "capfilm/spanning.hpp"

namespace capfilm::perturb {

struct DecollapseParams {
  double eta = 0.05;   // gap width cap
  double delta = 0.5;  // clearance fraction, in (0,1)
};

struct DecollapseResult {
  film::FilmComplex film;
  double boundary_length = 0.0;  // total chain length of the opened film
};

// Opens every doubled edge into a thin one-sided tube: the original chain
// stays put as a single sheet and a second sheet is offset from it by a
// tapered amount u, capped by eta, by half the distance to vertices, region
// boundaries and the wire, by delta times the local clearance within the
// network, and by delta over the chain curvature.  Sheets rejoin at the
// original endpoints and each opened tube becomes a region.  The offset
// side is chosen per edge for maximal clearance; retries with halved delta
// when the offsets fail to embed.
DecollapseResult decollapse(const film::FilmComplex& f, DecollapseParams p);

// One-parameter competitor family for an exteriorly collapsed film: area t
// moves from a dent in the region boundary at x2 into a pocket opened in a
// doubled edge at x1.  Both displacements use fixed directions, so the
// moved area is exact in t and the total volume is conserved.  t == 0
// returns f unchanged.
film::FilmComplex bump_competitor(const film::FilmComplex& f, geom::Point x1,
                                  geom::Point x2, double t);

struct PerturbationTrace {
  std::vector<double> ts;
  std::vector<double> energies;
  double fitted_slope = 0.0;
  double fitted_quadratic = 0.0;
  double baseline = 0.0;
};

// Energies of the bump family over the given sizes (at least 4, spanning a
// factor of 10), least-squares fitted to baseline + slope*t + quad*t^2.
// x1 defaults to the arclength midpoint of the longest doubled edge and x2
// to the region boundary point farthest from vertices and x1.
PerturbationTrace expansion_fit(const film::FilmComplex& f,
                                const std::vector<double>& ts);
PerturbationTrace expansion_fit(const film::FilmComplex& f,
                                const std::vector<double>& ts, geom::Point x1,
                                geom::Point x2);

struct ProbeResult {
  film::FilmComplex film;       // opened baseline plus a far bubble
  double energy = 0.0;          // relaxed energy of that film
  double baseline_length = 0.0; // shortest spanning network length
  double pocket_area = 0.0;     // area captured by the opened tubes
  double ball_area = 0.0;       // remainder carried by the bubble
};

// Feasible competitor at area epsilon: the shortest spanning network,
// doubled, opened by a small gap, plus a round bubble holding the missing
// area far from the frame.  Its energy upper-bounds the spanning infimum.
ProbeResult upper_bound_probe(const film::WireFrame& w,
                              const span::SpanningSpec& spec, double epsilon);

}  // namespace capfilm::perturb
