#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "capfilm/kernels.hpp"

using namespace capfilm;

namespace {

std::vector<double> random_chain(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> xy(2 * n);
  for (double& v : xy)
    v = 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
  return xy;
}

}  // namespace

TEST_CASE("scalar chain length matches closed-form values") {
  const auto& ops = kernels::scalar_ops();
  const std::vector<double> square = {0, 0, 1, 0, 1, 1, 0, 1};
  CHECK(ops.chain_length(square.data(), 4, false) == doctest::Approx(3.0));
  CHECK(ops.chain_length(square.data(), 4, true) == doctest::Approx(4.0));
  CHECK(ops.chain_length(square.data(), 1, false) == doctest::Approx(0.0));
}

TEST_CASE("scalar shoelace matches closed-form values") {
  const auto& ops = kernels::scalar_ops();
  const std::vector<double> square = {0, 0, 1, 0, 1, 1, 0, 1};
  CHECK(ops.shoelace2(square.data(), 4) == doctest::Approx(2.0));
  std::vector<double> cw(square.rbegin(), square.rend());
  // Reversing the flat array also swaps x and y, which mirrors the polygon;
  // build the reversed vertex order explicitly instead.
  cw = {0, 1, 1, 1, 1, 0, 0, 0};
  CHECK(ops.shoelace2(cw.data(), 4) == doctest::Approx(-2.0));
}

TEST_CASE("scalar point-chain distance matches direct computation") {
  const auto& ops = kernels::scalar_ops();
  const std::vector<double> seg = {0, 0, 1, 0};
  CHECK(ops.min_sqdist_point_chain(0.5, 0.5, seg.data(), 2, false) ==
        doctest::Approx(0.25));
  CHECK(ops.min_sqdist_point_chain(2.0, 0.0, seg.data(), 2, false) ==
        doctest::Approx(1.0));
  CHECK(ops.min_sqdist_point_chain(3.0, 4.0, seg.data(), 1, false) ==
        doctest::Approx(25.0));
}

TEST_CASE("vector lane agrees with the scalar reference") {
  if (!kernels::avx2_available()) {
    MESSAGE("no avx2 lane on this machine; nothing to compare");
    return;
  }
  const auto& s = kernels::scalar_ops();
  const auto& v = kernels::avx2_ops();
  std::mt19937_64 rng(7);
  for (const std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 64u, 257u}) {
    const std::vector<double> xy = random_chain(rng, n);
    for (const bool closed : {false, true}) {
      CHECK(v.chain_length(xy.data(), n, closed) ==
            doctest::Approx(s.chain_length(xy.data(), n, closed))
                .epsilon(1e-12));
      CHECK(v.min_sqdist_point_chain(0.3, -0.2, xy.data(), n, closed) ==
            doctest::Approx(s.min_sqdist_point_chain(0.3, -0.2, xy.data(), n,
                                                     closed))
                .epsilon(1e-12));
    }
    if (n >= 3)
      CHECK(v.shoelace2(xy.data(), n) ==
            doctest::Approx(s.shoelace2(xy.data(), n)).epsilon(1e-12));
  }
}

TEST_CASE("active lane honors the environment override") {
  const auto& a = kernels::active();
  CHECK((std::string(a.name) == "scalar" || std::string(a.name) == "avx2"));
}
