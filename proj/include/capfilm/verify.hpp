#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "capfilm/film_complex.hpp"

namespace capfilm::verify {

struct VerificationReport {
  std::string check;
  bool passed = false;
  double margin = 0.0;
  std::string details;
};

// Test vector field for stationarity identities.  eval must vanish within
// support_gap of every wire disk.
struct AdmissibleField {
  std::function<geom::Point(geom::Point)> eval;
  double support_gap = 0.0;
};

// Smooth random field: a few Gaussian bumps cut off near the wire so the
// support condition holds with room to spare.
AdmissibleField make_random_field(const film::WireFrame& wire, double gap,
                                  std::uint64_t seed);

// |λ ∫ X·ν over region boundaries − Σ_e mult_e Σ_seg (X(b)−X(a))·τ̂|.
// The tangential difference is the exact line integral of the tangential
// derivative over a straight segment, so only the flux side is quadrature.
// Throws if the field fails the support condition near the wire.
double first_variation_residual(const film::FilmComplex& f, double lambda,
                                const AdmissibleField& X,
                                int samples_per_edge = 1);

// Worst residual over a family of fields.
double first_variation_residual(const film::FilmComplex& f, double lambda,
                                const std::vector<AdmissibleField>& fields,
                                int samples_per_edge = 1);

// Containment of the network in the convex hull of the wire (λ ≤ 0), and
// additionally in the convex hull of the anchor points (λ < 0).  margin is
// the worst signed distance of a network point into the relevant hull,
// positive inside; exact anchor positions are left out of the margin.
// For λ > 0 the report passes as not applicable but still carries margins.
VerificationReport convex_hull_check(const film::FilmComplex& f,
                                     double lambda);

// Certificates behind the hull containment: with Z the convex hull of the
// anchors and X = γ(dist_Z)·∇dist_Z for a ramp γ vanishing within 2η of Z,
//   1. per-segment tangential increments of X are nonnegative,
//   2. the two sides of the stationarity identity for X agree within
//      1e-6·(1+|λ|),
//   3. for λ < 0 the region boundaries stay within η of Z.
// Certificate 1 holds for any configuration; 2 and 3 report not applicable
// when λ > 0.
std::vector<VerificationReport> hull_field_residual(const film::FilmComplex& f,
                                                    double lambda, double eta);

// Length of the network inside the ball, multiplicity ignored.
double ball_length(const film::FilmComplex& f, geom::Point center,
                   double radius);

// Lower density bound: at sampled network points x and radii r below the
// clearance to the wire, length(K ∩ B(x,r)) / r ≥ 1.
VerificationReport density_check(const film::FilmComplex& f, int samples,
                                 std::uint64_t seed);

}  // namespace capfilm::verify
