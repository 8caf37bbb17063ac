#pragma once

#include <string>

#include "capfilm/film_complex.hpp"

namespace capfilm::render {

// Deterministic standalone SVG: shaded wire disks, filled liquid regions,
// thin single-weight curves, thick double-weight curves, vertex dots.
std::string film_svg(const film::FilmComplex& f);

void save_film_svg(const film::FilmComplex& f, const std::string& path);

}  // namespace capfilm::render
