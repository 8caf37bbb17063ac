#pragma once

#include "capfilm/film_complex.hpp"

namespace capfilm::gen {

// Initial film topologies at a prescribed liquid area. Each returns a valid
// complex whose region area equals epsilon to solver precision; they are
// starting points for the flow, not equilibria (the lens and the drop are
// built at their analytic equilibrium shapes).

// Two arcs over the gap between the first two disks, one anchor per disk.
film::FilmComplex make_lens(const film::WireFrame& w, double epsilon);

// Curved triangle of liquid at the centroid of three disks, with doubled
// straight walls running from its corners to one anchor per disk.
film::FilmComplex make_collapsed_y(const film::WireFrame& w, double epsilon);

// Simple closed tube around the three-spoke skeleton: all walls single,
// one region, area epsilon set by the tube width.
film::FilmComplex make_inflated_y(const film::WireFrame& w, double epsilon);

// Free-standing circular region of area epsilon, a single self-loop edge.
film::FilmComplex make_drop(const film::WireFrame& w, double epsilon);

// Drop with a straight doubled whisker attached at its loop vertex and
// pointing radially outward; the whisker sits away from the region closure.
film::FilmComplex make_drop_with_antenna(const film::WireFrame& w,
                                         double epsilon,
                                         double antenna_length);

}  // namespace capfilm::gen
