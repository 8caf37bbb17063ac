#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "capfilm/generators.hpp"
#include "capfilm/solver.hpp"

using namespace capfilm;
using geom::Point;
using film::FilmComplex;

namespace {

// Independent lens equilibrium: two circular arcs over a chord of length L
// enclosing area eps, half-angle found by bisection on the segment area.
struct LensOracle {
  double alpha = 0.0;
  double lambda = 0.0;
  double energy = 0.0;
};

LensOracle lens_oracle(double L, double eps) {
  const auto area = [L](double a) {
    const double R = L / (2.0 * std::sin(a));
    return R * R * (a - std::sin(a) * std::cos(a));  // one circular segment
  };
  double lo = 1e-9, hi = std::numbers::pi / 2.0 - 1e-9;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * area(mid) < eps ? lo : hi) = mid;
  }
  LensOracle out;
  out.alpha = 0.5 * (lo + hi);
  const double R = L / (2.0 * std::sin(out.alpha));
  out.lambda = 1.0 / R;
  out.energy = 2.0 * (2.0 * R * out.alpha);
  return out;
}

// Closed-form collapsed triple junction configuration on an equilateral
// frame: junction distance rho from the center scales as sqrt(eps).
struct TripleOracle {
  double rho = 0.0;
  double lambda = 0.0;
};

TripleOracle triple_oracle(double eps) {
  const double unit_area = 3.0 * std::sqrt(3.0) - 1.5 * std::numbers::pi;
  TripleOracle out;
  out.rho = std::sqrt(eps / unit_area);
  out.lambda = -1.0 / (std::sqrt(3.0) * out.rho);
  return out;
}

solve::Scenario lens_scenario(double eps) {
  solve::Scenario s;
  s.wire.disks = {{{-0.5, 0.0}, 0.1}, {{0.5, 0.0}, 0.1}};
  s.spec.classes = {{1, 0}};
  s.epsilon = eps;
  s.initial = gen::make_lens(s.wire, eps);
  return s;
}

film::WireFrame triangle_frame() {
  film::WireFrame w;
  w.disks = {{{0.0, 0.0}, 0.05},
             {{1.0, 0.0}, 0.05},
             {{0.5, std::sqrt(3.0) / 2.0}, 0.05}};
  return w;
}

solve::Scenario triple_scenario(double eps, bool inflated) {
  solve::Scenario s;
  s.wire = triangle_frame();
  s.spec.classes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  s.epsilon = eps;
  s.initial = inflated ? gen::make_inflated_y(s.wire, eps)
                       : gen::make_collapsed_y(s.wire, eps);
  if (inflated) s.config.collapse_merge_distance = 0.01;
  return s;
}

double max_sag(const film::FilmEdge& e) {
  geom::Polyline seg;
  seg.vertices = {e.chain.front(), e.chain.back()};
  double worst = 0.0;
  for (const Point& p : e.chain)
    worst = std::max(worst, geom::min_distance(p, seg));
  return worst;
}

}  // namespace

TEST_CASE("shallow lens equilibrium matches the segment-area oracle") {
  const double eps = 1e-3;
  const auto [result, report] = solve::minimize(lens_scenario(eps));
  const LensOracle oracle = lens_oracle(0.8, eps);

  CHECK(report.spanning_ok);
  CHECK(report.classification == film::Classification::non_collapsed);
  CHECK(report.volume == doctest::Approx(eps).epsilon(1e-6));
  CHECK(report.lambda == doctest::Approx(oracle.lambda).epsilon(0.02));
  CHECK(report.energy == doctest::Approx(oracle.energy).epsilon(1e-3));
  // Thin-film limit of the multiplier for this chord length.
  CHECK(oracle.lambda ==
        doctest::Approx(6.0 * eps / (0.8 * 0.8 * 0.8)).epsilon(0.01));
  CHECK(report.lambda_spread <= 0.05 * std::abs(report.lambda) + 1e-6);
}

TEST_CASE("deep lens equilibrium matches the segment-area oracle") {
  const double eps = 0.5;
  const auto [result, report] = solve::minimize(lens_scenario(eps));
  const LensOracle oracle = lens_oracle(0.8, eps);
  CHECK(report.spanning_ok);
  CHECK(report.classification == film::Classification::non_collapsed);
  CHECK(report.lambda == doctest::Approx(oracle.lambda).epsilon(0.02));
  CHECK(report.energy == doctest::Approx(oracle.energy).epsilon(2e-3));

  // The film leaves the convex hull of the wire: some chain point lies
  // farther from the axis than the disk tops.
  double reach = 0.0;
  for (const film::FilmEdge& e : result.edges)
    for (const Point& p : e.chain) reach = std::max(reach, std::abs(p.y));
  CHECK(reach > 0.1 + 0.01);
}

TEST_CASE("collapsed triple point matches the closed form") {
  const double eps = 0.01;
  const auto [result, report] = solve::minimize(triple_scenario(eps, false));
  const TripleOracle oracle = triple_oracle(eps);

  CHECK(report.spanning_ok);
  CHECK(report.classification == film::Classification::exteriorly_collapsed);
  CHECK(report.lambda < 0.0);
  CHECK(report.lambda == doctest::Approx(oracle.lambda).epsilon(0.03));
  CHECK(report.junction_residual < 1e-2);
  CHECK(report.lambda * std::sqrt(eps) ==
        doctest::Approx(-0.4016).epsilon(0.03));

  for (const film::FilmEdge& e : result.edges) {
    if (e.multiplicity != 2) continue;
    const double len = geom::polyline_length(film::edge_polyline(e));
    CHECK(max_sag(e) <= 1e-3 * len);
  }
}

TEST_CASE("inflated walls collapse onto the triple star during the flow") {
  const double eps = 0.01;
  const auto [result, report] = solve::minimize(triple_scenario(eps, true));
  const TripleOracle oracle = triple_oracle(eps);

  CHECK(report.spanning_ok);
  CHECK(report.classification == film::Classification::exteriorly_collapsed);
  CHECK(report.lambda == doctest::Approx(oracle.lambda).epsilon(0.05));
  CHECK(report.junction_residual < 1e-2);
}

TEST_CASE("lambda is stable under mesh refinement") {
  solve::Scenario coarse = lens_scenario(1e-3);
  solve::Scenario fine = lens_scenario(1e-3);
  fine.config.resample_target_edge_length =
      coarse.config.resample_target_edge_length / 2.0;
  const auto r1 = solve::minimize(coarse).second;
  const auto r2 = solve::minimize(fine).second;
  CHECK(std::abs(r1.lambda - r2.lambda) <= 0.01 * std::abs(r1.lambda));
  CHECK(std::abs(r1.energy - r2.energy) <= 0.01 * r1.energy);
}

TEST_CASE("multiplier estimate needs a region") {
  FilmComplex f;
  f.wire.disks = {{{-0.6, 0.0}, 0.1}, {{0.6, 0.0}, 0.1}};
  film::FilmVertex a, b;
  a.kind = b.kind = film::VertexKind::anchor;
  a.position = {-0.5, 0.0};
  a.disk = 0;
  b.position = {0.5, 0.0};
  b.disk = 1;
  f.vertices = {a, b};
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 1;
  e.multiplicity = 2;
  e.chain = {{-0.5, 0.0}, {0.0, 0.0}, {0.5, 0.0}};
  f.edges.push_back(e);
  CHECK_THROWS_WITH_AS(solve::lambda_estimate(f), "λ undefined without ∂*E",
                       std::runtime_error);
}

TEST_CASE("junction balance residual") {
  FilmComplex f;
  f.wire.disks = {{{5.0, 5.0}, 0.1}};
  film::FilmVertex hub;
  hub.position = {0.0, 0.0};
  f.vertices.push_back(hub);
  const Point dirs[3] = {{1.0, 0.0},
                         {-0.5, std::sqrt(3.0) / 2.0},
                         {-0.5, -std::sqrt(3.0) / 2.0}};
  for (const Point& d : dirs) {
    film::FilmVertex tip;
    tip.position = d;
    f.vertices.push_back(tip);
    film::FilmEdge e;
    e.v0 = 0;
    e.v1 = int(f.vertices.size()) - 1;
    e.multiplicity = 1;
    for (int i = 0; i <= 8; ++i)
      e.chain.push_back((double(i) / 8.0) * d);
    f.edges.push_back(e);
  }
  CHECK(solve::junction_residual(f) == doctest::Approx(0.0).epsilon(1e-12));

  // Swing one leg to 90 degrees off the first.
  auto& chain = f.edges[1].chain;
  const Point ninety{0.0, 1.0};
  chain.clear();
  for (int i = 0; i <= 8; ++i) chain.push_back((double(i) / 8.0) * ninety);
  f.vertices[2].position = ninety;
  const double expected =
      geom::norm(Point{1.0, 0.0} + ninety +
                 Point{-0.5, -std::sqrt(3.0) / 2.0});
  CHECK(solve::junction_residual(f) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("parallel strands merge into a doubled midline") {
  FilmComplex f;
  f.wire.disks = {{{5.0, 5.0}, 0.1}};
  film::FilmVertex a, b;
  a.position = {0.0, 0.0};
  b.position = {1.0, 0.0};
  f.vertices = {a, b};
  for (const double side : {1.0, -1.0}) {
    film::FilmEdge e;
    e.v0 = 0;
    e.v1 = 1;
    e.multiplicity = 1;
    for (int i = 0; i <= 32; ++i) {
      const double t = double(i) / 32.0;
      e.chain.push_back({t, side * 0.004 * std::sin(std::numbers::pi * t)});
    }
    f.edges.push_back(e);
  }
  const FilmComplex merged = solve::collapse_merge(f, 0.01);
  REQUIRE(merged.edges.size() == 1);
  CHECK(merged.edges[0].multiplicity == 2);
  for (const Point& p : merged.edges[0].chain) CHECK(std::abs(p.y) <= 1e-3);
  CHECK(film::relaxed_energy(merged) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("a well separated lens is left alone") {
  const FilmComplex lens = gen::make_lens(lens_scenario(1e-3).wire, 1e-3);
  const FilmComplex merged = solve::collapse_merge(lens, 1e-4);
  CHECK(merged.edges.size() == lens.edges.size());
}
