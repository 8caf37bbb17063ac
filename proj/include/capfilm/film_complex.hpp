#pragma once

#include <string>
#include <vector>

#include "capfilm/geometry.hpp"

namespace capfilm::film {

struct Disk {
  geom::Point center;
  double radius = 0.0;
};

// Obstacle set W; the accessible region is the plane minus the closed disks.
struct WireFrame {
  std::vector<Disk> disks;
};

enum class VertexKind { free_junction, anchor };

struct FilmVertex {
  geom::Point position;
  VertexKind kind = VertexKind::free_junction;
  int disk = -1;  // anchor: index of the disk whose circle holds the vertex
};

// Weighted curve; chain includes both endpoint positions, which must match
// the referenced vertices.
struct FilmEdge {
  int v0 = -1;
  int v1 = -1;
  int multiplicity = 1;
  std::vector<geom::Point> chain;
};

struct OrientedEdge {
  int edge = -1;
  bool forward = true;
};

// Liquid region boundary: cyclic list of multiplicity-1 edge references,
// oriented so the assembled loop runs CCW.
struct LiquidRegion {
  std::vector<OrientedEdge> loop;
};

struct FilmComplex {
  WireFrame wire;
  std::vector<FilmVertex> vertices;
  std::vector<FilmEdge> edges;
  std::vector<LiquidRegion> regions;
};

enum class Classification { non_collapsed, collapsed, exteriorly_collapsed };
const char* to_string(Classification c);

struct Violation {
  std::string code;
  std::string detail;
};

struct SolveReport {
  double energy = 0.0;
  double volume = 0.0;
  double lambda = 0.0;
  Classification classification = Classification::non_collapsed;
  double junction_residual = 0.0;
  bool spanning_ok = false;
  int iterations = 0;
  // diagnostics beyond the CSV schema
  double lambda_spread = 0.0;
  bool converged = false;
  int step_halvings = 0;
};

// Sum over edges of multiplicity times chain length.
double relaxed_energy(const FilmComplex& f);

// Sum of region loop areas.  Throws on a loop that fails to enclose
// positive area.
double liquid_volume(const FilmComplex& f);

// Empty list iff the complex satisfies the structural rules: region
// boundaries reference existing multiplicity-1 edges and close up CCW,
// edges stay clear of open disks and cross only at shared vertices,
// multiplicities are 1 or 2, chain endpoints sit on their vertices, and
// anchors sit on their circles.
std::vector<Violation> validate(const FilmComplex& f, double tol = 1e-9);

// non_collapsed: no multiplicity-2 edge.  exteriorly_collapsed: some
// multiplicity-2 edge sample lies at distance > tol from every region
// closure.  collapsed otherwise.
Classification classify(const FilmComplex& f, double tol = 1e-9);

// --------------------------------------------------------------- helpers ---

geom::Polyline edge_polyline(const FilmEdge& e);

// Assembled closed boundary polygon of a region, CCW, junction points not
// repeated.
geom::Polyline region_polygon(const FilmComplex& f, const LiquidRegion& r);

// Zero inside or on the region, else distance to its boundary.
double distance_to_region_closure(const FilmComplex& f, const LiquidRegion& r,
                                  geom::Point p);

// Distance from a point to the union of all edge chains.
double distance_to_film(const FilmComplex& f, geom::Point p);

std::vector<geom::Point> anchor_positions(const FilmComplex& f);

struct Bounds {
  geom::Point lo;
  geom::Point hi;
};
// Bounding box of the wire frame plus all edge chains.
Bounds film_bounds(const FilmComplex& f);

double frame_diameter(const WireFrame& w);

// Even-odd point-in-polygon on a closed chain.
bool point_in_polygon(geom::Point p, const geom::Polyline& poly);

}  // namespace capfilm::film
