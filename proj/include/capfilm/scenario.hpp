#pragma once

#include <string>

#include "capfilm/solver.hpp"

namespace capfilm::io {

// Sectioned text scenario, header line "capfilm scenario v1".  Unknown
// sections or keys fail with the source name, line, and column.  A positive
// epsilon_override replaces the file's value before the starting topology
// is generated.
solve::Scenario parse_scenario(const std::string& text,
                               const std::string& source_name,
                               double epsilon_override = 0.0);
solve::Scenario load_scenario(const std::string& path,
                              double epsilon_override = 0.0);

// Film serialization, header line "capfilm film v1".  Round-trips exactly:
// numbers are written with enough digits to reproduce the doubles.
std::string film_to_text(const film::FilmComplex& f);
film::FilmComplex film_from_text(const std::string& text,
                                 const std::string& source_name);
film::FilmComplex load_film(const std::string& path);
void save_film(const film::FilmComplex& f, const std::string& path);

}  // namespace capfilm::io
