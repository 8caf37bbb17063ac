#pragma once

#include <cstddef>
#include <vector>

namespace capfilm::geom {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point p);
double distance(Point a, Point b);
// Zero-length input normalizes to (0,0).
Point normalized(Point p);
// Rotate by -90 degrees; for a CCW closed chain this turns a tangent into
// the outward normal.
inline Point right_normal(Point p) { return {p.y, -p.x}; }
// Rotate by +90 degrees.
inline Point left_normal(Point p) { return {-p.y, p.x}; }

// Vertex chain; consecutive vertices must be distinct.  closed means the
// last vertex connects back to the first without repeating it.
struct Polyline {
  std::vector<Point> vertices;
  bool closed = false;
};

// Per-vertex scalar samples aligned with a Polyline's vertex list.
using ScalarField = std::vector<double>;

// Hull in CCW order.  degenerate marks inputs that span no area (all points
// within tol of a point or a line); vertices then hold the extreme points.
struct ConvexPolygon {
  std::vector<Point> vertices;
  bool degenerate = false;

  bool contains(Point p, double tol = 1e-9) const;
  // Positive inside, negative outside; for degenerate hulls the negated
  // distance to the extreme set.
  double signed_distance(Point p) const;
};

double polyline_length(const Polyline& p);

// Shoelace area of a closed chain; positive for CCW orientation.
// Throws std::invalid_argument("open chain has no area") on open chains.
double signed_area(const Polyline& p);

ConvexPolygon convex_hull(const std::vector<Point>& pts, double tol = 1e-12);

// Signed curvature per vertex from the circumcircle through vertices
// i-window, i, i+window; positive where the chain turns left (a CCW circle
// of radius R reports +1/R).  Open chains copy the nearest interior value
// into the end vertices.  Requires window >= 1 and at least 2*window+1
// vertices.
ScalarField fit_curvature(const Polyline& p, std::size_t window = 1);

// Offset each vertex along its discrete unit normal (angle bisector of the
// adjacent edge normals; bare edge normal at open ends) by side*u[i].
// side=+1 offsets along the right-hand normal, outward for CCW chains.
// Throws std::runtime_error("offset not embedded") when the result
// self-intersects.
Polyline normal_offset(const Polyline& p, const ScalarField& u, int side);

double min_distance(const Polyline& p, const Polyline& q);
double min_distance(Point p, const Polyline& q);

// True when two segment chains share a transversal crossing (shared
// endpoints within tol do not count).
bool chains_cross(const Polyline& p, const Polyline& q, double tol = 1e-12);

// Resample a chain to vertices roughly spacing apart, uniform in arclength;
// endpoints are preserved, and closed chains keep vertex 0.
Polyline resample(const Polyline& p, double spacing);

}  // namespace capfilm::geom
