#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "capfilm/solver.hpp"
#include "capfilm/verify.hpp"
#include "fixtures.hpp"

using namespace capfilm;
using geom::Point;
using film::FilmComplex;

namespace {

double mean_residual(const FilmComplex& f, double gap, int seeds) {
  const double lambda = solve::lambda_estimate(f).first;
  double sum = 0.0;
  for (int s = 1; s <= seeds; ++s) {
    const auto X = verify::make_random_field(f.wire, gap, std::uint64_t(s));
    sum += verify::first_variation_residual(f, lambda, X, 1);
  }
  return sum / double(seeds);
}

FilmComplex dangling_stub() {
  FilmComplex f;
  f.wire.disks = {{{5.0, 5.0}, 0.1}};
  f.vertices.push_back(fixtures::free_vertex({0.0, 0.0}));
  f.vertices.push_back(fixtures::free_vertex({1.0, 0.0}));
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 1;
  e.multiplicity = 1;
  for (int i = 0; i <= 8; ++i) e.chain.push_back({double(i) / 8.0, 0.0});
  f.edges.push_back(e);
  return f;
}

}  // namespace

TEST_CASE("round drop multiplier and exact-zero field") {
  const FilmComplex f = fixtures::round_drop(128);
  CHECK(film::validate(f).empty());
  const auto [lambda, spread] = solve::lambda_estimate(f);
  CHECK(lambda == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(spread < 1e-9);

  verify::AdmissibleField zero;
  zero.eval = [](Point) { return Point{0.0, 0.0}; };
  zero.support_gap = 0.125;
  CHECK(verify::first_variation_residual(f, lambda, zero, 1) == 0.0);
}

TEST_CASE("identity residual shrinks with drop chain density") {
  const double gap = 0.125;
  const double r64 = mean_residual(fixtures::round_drop(64), gap, 5);
  const double r128 = mean_residual(fixtures::round_drop(128), gap, 5);
  const double r256 = mean_residual(fixtures::round_drop(256), gap, 5);
  CHECK(r64 / r128 >= 1.8);
  CHECK(r128 / r256 >= 1.8);
}

TEST_CASE("tangent star is stationary") {
  const double eps = 0.01;
  const double a = fixtures::star_radius_for_area(eps);
  const FilmComplex f = fixtures::tangent_star(a, 48, 24);
  CHECK(film::validate(f).empty());
  CHECK(film::classify(f) == film::Classification::exteriorly_collapsed);
  CHECK(film::liquid_volume(f) == doctest::Approx(eps).epsilon(1e-3));

  const auto [lambda, spread] = solve::lambda_estimate(f);
  CHECK(lambda == doctest::Approx(fixtures::star_lambda(a)).epsilon(1e-9));
  CHECK(spread < 1e-6);
  CHECK(solve::junction_residual(f) < 1e-2);
}

TEST_CASE("identity residual shrinks with star chain density") {
  const double a = fixtures::star_radius_for_area(0.01);
  const double gap = 0.0125;
  const double r1 = mean_residual(fixtures::tangent_star(a, 24, 12), gap, 5);
  const double r2 = mean_residual(fixtures::tangent_star(a, 48, 24), gap, 5);
  const double r3 = mean_residual(fixtures::tangent_star(a, 96, 48), gap, 5);
  CHECK(r1 / r2 >= 1.8);
  CHECK(r2 / r3 >= 1.8);
}

TEST_CASE("support condition is enforced") {
  const FilmComplex f = fixtures::round_drop(64);
  verify::AdmissibleField bad;
  bad.eval = [](Point) { return Point{1.0, 0.0}; };
  bad.support_gap = 0.125;
  CHECK_THROWS_WITH_AS(verify::first_variation_residual(f, 2.0, bad, 1),
                       "field fails support condition", std::invalid_argument);

  const auto X = verify::make_random_field(f.wire, 0.125, 42);
  // Exactly zero inside the support gap collar around the wire.
  const Point close{0.5 + 0.05, 0.0};
  CHECK(geom::norm(X.eval(close)) == 0.0);

  const auto Y = verify::make_random_field(f.wire, 0.125, 42);
  const auto Z = verify::make_random_field(f.wire, 0.125, 43);
  const Point probe{2.0, 1.0};
  CHECK(X.eval(probe).x == Y.eval(probe).x);
  CHECK(X.eval(probe).y == Y.eval(probe).y);
  const bool differs = X.eval(probe).x != Z.eval(probe).x ||
                       X.eval(probe).y != Z.eval(probe).y;
  CHECK(differs);

  CHECK_THROWS_WITH_AS(verify::make_random_field(f.wire, 0.0, 1),
                       "gap must be positive", std::invalid_argument);
}

TEST_CASE("convex hull check covers all three multiplier cases") {
  const FilmComplex drop = fixtures::round_drop(64);
  const auto pos = verify::convex_hull_check(drop, 2.0);
  CHECK(pos.passed);
  CHECK(pos.details.rfind("not applicable (λ>0)", 0) == 0);

  const double a = fixtures::star_radius_for_area(0.01);
  const FilmComplex star = fixtures::tangent_star(a, 48, 24);
  const double lam = fixtures::star_lambda(a);
  const auto neg = verify::convex_hull_check(star, lam);
  CHECK(neg.passed);
  CHECK(neg.margin > 0.0);
  CHECK(neg.details.find("anchor hull margin") != std::string::npos);

  const auto outside = verify::convex_hull_check(dangling_stub(), -1.0);
  CHECK_FALSE(outside.passed);
  CHECK(outside.margin < 0.0);

  FilmComplex empty;
  CHECK_THROWS_WITH_AS(verify::convex_hull_check(empty, -1.0),
                       "wire frame is empty", std::invalid_argument);
}

TEST_CASE("hull field certificates pass on the tangent star") {
  const double a = fixtures::star_radius_for_area(0.01);
  const FilmComplex star = fixtures::tangent_star(a, 48, 24);
  const double lam = fixtures::star_lambda(a);
  const double eta = 0.02 * film::frame_diameter(star.wire);
  const auto reps = verify::hull_field_residual(star, lam, eta);
  REQUIRE(reps.size() == 3);
  CHECK(reps[0].check == "hull_field_divergence");
  CHECK(reps[1].check == "hull_field_identity");
  CHECK(reps[2].check == "hull_field_region_collar");
  for (const auto& r : reps) CHECK(r.passed);

  CHECK_THROWS_WITH_AS(verify::hull_field_residual(star, lam, 0.0),
                       "eta must be positive", std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      verify::hull_field_residual(fixtures::round_drop(64), 2.0, 0.1),
      "film has no anchors", std::invalid_argument);
}

TEST_CASE("residual is linear in the field") {
  const double a = fixtures::star_radius_for_area(0.01);
  const FilmComplex star = fixtures::tangent_star(a, 48, 24);
  const double lam = fixtures::star_lambda(a);
  const auto X = verify::make_random_field(star.wire, 0.0125, 11);

  const auto scaled_by = [&X](double c) {
    verify::AdmissibleField Y;
    Y.support_gap = X.support_gap;
    Y.eval = [c, base = X.eval](Point p) { return c * base(p); };
    return Y;
  };

  const double r1 = verify::first_variation_residual(star, lam, X, 2);
  const double r4 =
      verify::first_variation_residual(star, lam, scaled_by(4.0), 2);
  CHECK(r4 == doctest::Approx(4.0 * r1).epsilon(1e-12));
  const double r35 =
      verify::first_variation_residual(star, lam, scaled_by(3.5), 2);
  CHECK(r35 == doctest::Approx(3.5 * r1).epsilon(1e-9));
}

TEST_CASE("family residual takes the worst field") {
  const double a = fixtures::star_radius_for_area(0.01);
  const FilmComplex star = fixtures::tangent_star(a, 48, 24);
  const double lam = fixtures::star_lambda(a);

  std::vector<verify::AdmissibleField> fields;
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    fields.push_back(verify::make_random_field(star.wire, 0.0125, s));
    worst = std::max(
        worst, verify::first_variation_residual(star, lam, fields.back(), 1));
  }
  CHECK(verify::first_variation_residual(star, lam, fields, 1) == worst);
  CHECK_THROWS_WITH_AS(
      verify::first_variation_residual(star, lam,
                                       std::vector<verify::AdmissibleField>{},
                                       1),
      "fields must be nonempty", std::invalid_argument);
}

TEST_CASE("ball clipping matches chord oracles") {
  FilmComplex seg;
  seg.vertices.push_back(fixtures::free_vertex({0.0, 0.0}));
  seg.vertices.push_back(fixtures::free_vertex({2.0, 0.0}));
  film::FilmEdge e;
  e.v0 = 0;
  e.v1 = 1;
  e.multiplicity = 1;
  for (int i = 0; i <= 8; ++i) e.chain.push_back({0.25 * double(i), 0.0});
  seg.edges.push_back(e);
  CHECK(verify::ball_length(seg, {1.0, 0.0}, 0.3) ==
        doctest::Approx(0.6).epsilon(1e-12));

  FilmComplex tri;
  tri.vertices.push_back(fixtures::free_vertex({0.0, 0.0}));
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * std::numbers::pi * double(k) / 3.0;
    const Point tip{std::cos(th), std::sin(th)};
    tri.vertices.push_back(fixtures::free_vertex(tip));
    film::FilmEdge ray;
    ray.v0 = 0;
    ray.v1 = k + 1;
    ray.multiplicity = 1;
    for (int i = 0; i <= 4; ++i) ray.chain.push_back(0.25 * double(i) * tip);
    tri.edges.push_back(ray);
  }
  const double r = 0.4;
  CHECK(verify::ball_length(tri, {0.0, 0.0}, r) / r ==
        doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(verify::ball_length(seg, {0.0, 0.0}, 0.0),
                       "radius must be positive", std::invalid_argument);
}

TEST_CASE("ball length never grows when an edge is removed") {
  const double a = fixtures::star_radius_for_area(0.01);
  const FilmComplex star = fixtures::tangent_star(a, 48, 24);
  FilmComplex pruned = star;
  pruned.edges.pop_back();

  for (const film::FilmEdge& e : star.edges) {
    const Point x = e.chain[e.chain.size() / 2];
    for (const double r : {0.02, 0.1, 0.4}) {
      CHECK(verify::ball_length(star, x, r) >=
            verify::ball_length(pruned, x, r) - 1e-15);
    }
  }
}

TEST_CASE("density holds on films and fails on a dangling strand") {
  const auto drop_rep = verify::density_check(fixtures::round_drop(128), 100, 7);
  CHECK(drop_rep.check == "density");
  CHECK(drop_rep.passed);
  CHECK(drop_rep.margin >= -1e-6);

  const double a = fixtures::star_radius_for_area(0.01);
  const auto star_rep =
      verify::density_check(fixtures::tangent_star(a, 48, 24), 100, 7);
  CHECK(star_rep.passed);

  const auto stub_rep = verify::density_check(dangling_stub(), 100, 7);
  CHECK_FALSE(stub_rep.passed);
}
