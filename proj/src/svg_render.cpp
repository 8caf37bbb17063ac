#include "capfilm/svg_render.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace capfilm::render {

namespace {

void write_points(std::ostringstream& out, const std::vector<geom::Point>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << " ";
    out << pts[i].x << "," << -pts[i].y;
  }
}

}  // namespace

std::string film_svg(const film::FilmComplex& f) {
  film::Bounds bb = film::film_bounds(f);
  double w = bb.hi.x - bb.lo.x;
  double h = bb.hi.y - bb.lo.y;
  if (w <= 0.0) w = 1.0;
  if (h <= 0.0) h = 1.0;
  const double pad = 0.08 * std::max(w, h);
  const double diam = std::max(w, h) + 2.0 * pad;
  const double thin = 0.004 * diam;
  const double thick = 0.009 * diam;
  const double dot = 0.007 * diam;

  std::ostringstream out;
  out << std::setprecision(8);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
      << "viewBox=\"" << bb.lo.x - pad << " " << -(bb.hi.y + pad) << " "
      << w + 2.0 * pad << " " << h + 2.0 * pad << "\">\n";

  for (const film::LiquidRegion& r : f.regions) {
    const geom::Polyline poly = film::region_polygon(f, r);
    out << "  <polygon points=\"";
    write_points(out, poly.vertices);
    out << "\" fill=\"#bcd9f5\" fill-opacity=\"0.75\" stroke=\"none\"/>\n";
  }

  for (const film::Disk& d : f.wire.disks) {
    out << "  <circle cx=\"" << d.center.x << "\" cy=\"" << -d.center.y
        << "\" r=\"" << d.radius
        << "\" fill=\"#d9d9d9\" stroke=\"#555555\" stroke-width=\""
        << 0.5 * thin << "\"/>\n";
  }

  for (const film::FilmEdge& e : f.edges) {
    out << "  <polyline points=\"";
    write_points(out, e.chain);
    out << "\" fill=\"none\" stroke=\""
        << (e.multiplicity == 2 ? "#aa3333" : "#275d8c")
        << "\" stroke-width=\"" << (e.multiplicity == 2 ? thick : thin)
        << "\" stroke-linecap=\"round\"/>\n";
  }

  for (const film::FilmVertex& v : f.vertices) {
    out << "  <circle cx=\"" << v.position.x << "\" cy=\"" << -v.position.y
        << "\" r=\"" << dot << "\" fill=\""
        << (v.kind == film::VertexKind::anchor ? "#333333" : "#111111")
        << "\"/>\n";
  }

  out << "</svg>\n";
  return out.str();
}

void save_film_svg(const film::FilmComplex& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write svg file: " + path);
  out << film_svg(f);
}

}  // namespace capfilm::render
