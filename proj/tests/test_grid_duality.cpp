#include "doctest.h"

#include <cmath>

#include "stabcert/duality.hpp"
#include "stabcert/grid.hpp"
#include "test_support.hpp"

using namespace stabcert;
using test_support::Rng;
using test_support::random_state;

TEST_CASE("L1 and sup norms on reference states") {
  const Grid g(0.0, 1.0, 1000);

  CHECK(norm(GridFunction::zeros(g, NormTag::L1)) == 0.0);
  CHECK(norm(GridFunction::zeros(g, NormTag::Sup)) == 0.0);

  // constants are integrated exactly by the midpoint rule
  const Grid coarse(0.0, 1.0, 7);
  CHECK(norm(GridFunction::constant(coarse, NormTag::L1, 1.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // int_0^1 x dx = 1/2 (midpoint rule is exact for linear integrands)
  const GridFunction ramp = GridFunction::sample(g, NormTag::L1, [](double x) { return x; });
  CHECK(std::abs(norm(ramp) - 0.5) < 1e-6);

  const GridFunction fsup =
      GridFunction::sample(g, NormTag::Sup, [](double x) { return std::sin(3.0 * x); });
  double expected = 0.0;
  for (int i = 0; i < g.n_cells; ++i) expected = std::max(expected, std::abs(fsup[i]));
  CHECK(norm(fsup) == expected);
}

TEST_CASE("norm homogeneity and triangle inequality on seeded states") {
  const Grid g(0.0, 1.0, 257);
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const NormTag tag = trial % 2 ? NormTag::L1 : NormTag::Sup;
    const GridFunction y = random_state(rng, g, tag);
    const GridFunction z = random_state(rng, g, tag);
    const double c = rng.uniform(-8.0, 8.0);
    CHECK(norm(scaled(y, c)) == doctest::Approx(std::abs(c) * norm(y)).epsilon(1e-13));
    const double lhs = norm(add(y, z));
    const double rhs = norm(y) + norm(z);
    CHECK(lhs <= rhs + 1e-12 * rhs);
  }
}

TEST_CASE("duality selection on reference states") {
  const Grid g(0.0, 1.0, 100);

  SUBCASE("constant 1 in L1") {
    const GridFunction y = GridFunction::constant(g, NormTag::L1, 1.0);
    const DualityElement j = duality_select(y);
    REQUIRE(j.kind == DualityElement::Kind::L1Sign);
    CHECK(j.scale == doctest::Approx(1.0).epsilon(1e-14));
    for (double s : j.sign_values) CHECK(s == 1.0);
  }

  SUBCASE("unique negative maximum in sup norm") {
    GridFunction y = GridFunction::zeros(g, NormTag::Sup);
    y[17] = -2.0;
    y[40] = 1.5;
    const DualityElement j = duality_select(y);
    REQUIRE(j.kind == DualityElement::Kind::PointMass);
    CHECK(j.index == 17);
    CHECK(j.weight == -2.0);
  }

  SUBCASE("sup-norm ties resolve to the smallest index") {
    GridFunction y = GridFunction::zeros(g, NormTag::Sup);
    y[30] = 3.0;
    y[60] = -3.0;
    CHECK(duality_select(y).index == 30);
  }

  SUBCASE("zero state gives the zero functional") {
    const GridFunction zl = GridFunction::zeros(g, NormTag::L1);
    CHECK(duality_select(zl).scale == 0.0);
    const GridFunction zs = GridFunction::zeros(g, NormTag::Sup);
    CHECK(duality_select(zs).weight == 0.0);
    CHECK(pair(zl, duality_select(zl)) == 0.0);
  }
}

TEST_CASE("defining property <y, J(y)> = ||y||^2 on seeded states") {
  const Grid g(0.0, 2.0, 313);
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const NormTag tag = trial % 2 ? NormTag::L1 : NormTag::Sup;
    const GridFunction y = random_state(rng, g, tag);
    if (norm(y) == 0.0) continue;
    const double p = pair(y, duality_select(y));
    const double n2 = norm(y) * norm(y);
    CHECK(std::abs(p - n2) <= 1e-10 * n2);
  }
}

TEST_CASE("pairing bound |<z, J(y)>| <= ||z|| ||y||") {
  const Grid g(0.0, 1.0, 128);
  Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const NormTag tag = trial % 2 ? NormTag::L1 : NormTag::Sup;
    const GridFunction y = random_state(rng, g, tag);
    const GridFunction z = random_state(rng, g, tag);
    const double p = std::abs(pair(z, duality_select(y)));
    CHECK(p <= norm(z) * norm(y) * (1.0 + 1e-10));
  }
}

TEST_CASE("pairing rejects grid mismatches") {
  const Grid a(0.0, 1.0, 64), b(0.0, 1.0, 65);
  const GridFunction y = GridFunction::constant(a, NormTag::L1, 1.0);
  const GridFunction z = GridFunction::constant(b, NormTag::L1, 1.0);
  CHECK_THROWS_AS((void)pair(z, duality_select(y)), std::invalid_argument);
}
