#include "doctest.h"

#include <cmath>

#include "stabcert/operators.hpp"
#include "stabcert/sampling.hpp"
#include "test_support.hpp"

using namespace stabcert;
using test_support::Rng;
using test_support::random_state;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridFunction exp_profile(const Grid& g, double k0 = 0.5, double rate = 1.0) {
  return GridFunction::sample(g, NormTag::L1,
                              [&](double x) { return k0 * std::exp(-rate * x); });
}
}  // namespace

TEST_CASE("observation maps") {
  SUBCASE("Dirac trace of a constant") {
    const Grid g(0.0, 1.0, 50);
    const ControlOperatorModel op = ControlOperatorModel::dirac_trace(2.0);
    const Observation o = op.observe(GridFunction::constant(g, NormTag::L1, 1.0));
    REQUIRE(o.is_scalar);
    CHECK(o.scalar == doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("multiplication annihilates disjoint support") {
    const Grid g(0.0, 10.0, 500);
    const GridFunction k = GridFunction::sample(
        g, NormTag::L1, [](double x) { return x < 2.0 ? 0.4 : 0.0; });
    const ControlOperatorModel op = ControlOperatorModel::multiplication(k);
    const GridFunction y = GridFunction::sample(
        g, NormTag::L1, [](double x) { return x > 5.0 ? 1.0 : 0.0; });
    const Observation o = op.observe(y);
    REQUIRE(!o.is_scalar);
    CHECK(norm(o.func) == 0.0);
  }

  SUBCASE("||k||_1 >= 1 is rejected") {
    const Grid g(0.0, 1.0, 100);
    CHECK_THROWS_AS(
        ControlOperatorModel::multiplication(GridFunction::constant(g, NormTag::L1, 1.5)),
        std::invalid_argument);
  }
}

TEST_CASE("forward difference is first-order consistent") {
  double err[2];
  const int sizes[2] = {100, 200};
  for (int r = 0; r < 2; ++r) {
    const Grid g(0.0, 1.0, sizes[r]);
    const GridFunction y =
        GridFunction::sample(g, NormTag::Sup, [](double x) { return std::sin(2.0 * x); });
    const GridFunction dy = ControlOperatorModel::forward_difference(y);
    double worst = 0.0;
    for (int i = 0; i + 1 < g.n_cells; ++i)
      worst = std::max(worst, std::abs(dy[i] - 2.0 * std::cos(2.0 * g.center(i))));
    err[r] = worst;
  }
  CHECK(err[0] < 0.05);
  CHECK(err[1] / err[0] == doctest::Approx(0.5).epsilon(0.25));
}

TEST_CASE("x-part pairings") {
  SUBCASE("Dirac trace: <_X B y, J(y)> = ||y||_1^2 exactly") {
    const Grid g(0.0, 1.0, 211);
    const ControlOperatorModel op = ControlOperatorModel::dirac_trace(1.0);
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction y = random_state(rng, g, NormTag::L1);
      const double n2 = norm(y) * norm(y);
      CHECK(std::abs(x_part_pairing(op, y) - n2) <= 1e-12 * std::max(n2, 1e-30));
    }
  }

  SUBCASE("multiplication: matches the direct-sum oracle") {
    const Grid g(0.0, 6.0, 300);
    const GridFunction k = exp_profile(g);
    const ControlOperatorModel op = ControlOperatorModel::multiplication(k);
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction y = random_state(rng, g, NormTag::L1);
      double s = 0.0;
      for (int i = 0; i < g.n_cells; ++i) s += (1.0 + k[i]) * std::abs(y[i]);
      const double oracle = norm(y) * g.dx() * s;
      CHECK(x_part_pairing(op, y) ==
            doctest::Approx(oracle).epsilon(1e-12).scale(std::max(oracle, 1e-30)));
    }
  }

  SUBCASE("identity-plus-derivative on smooth Neumann states") {
    const Grid g(0.0, 1.0, 200);
    const SemigroupModel S = SemigroupModel::heat_neumann(g, 0.005, HeatScheme::ImplicitEuler);
    const ControlOperatorModel op = ControlOperatorModel::identity_plus_derivative();
    SampleSpec spec{40, 321, SampleFamily::SmoothModes};
    const auto samples = make_samples(spec, g, NormTag::Sup, SampleBC::Neumann, g.length());
    for (const GridFunction& y : samples) {
      const double n2 = norm(y) * norm(y);
      const double graph = norm(y) + norm(S.generator().apply(y));
      // <B y, J(y)> = ||y||^2 up to the derivative at the discrete argmax
      CHECK(std::abs(x_part_pairing(op, y) - n2) <= 5.0 * g.dx() * graph * norm(y));
      // <y', J(y)> vanishes at maxima up to O(dx)
      const GridFunction dy = ControlOperatorModel::forward_difference(y);
      const double p = std::abs(pair(dy, duality_select(y)));
      CHECK(p <= 5.0 * g.dx() * graph * norm(y));
    }
  }
}

TEST_CASE("f_BC limsup") {
  SUBCASE("identity composite converges to ||y||^2 along the ladder") {
    const Grid g(0.0, 1.0, 120);
    const SemigroupModel S = SemigroupModel::heat_neumann(g, 0.005, HeatScheme::ImplicitEuler);
    // k = 0 makes the full operator the identity
    const ControlOperatorModel op =
        ControlOperatorModel::multiplication(GridFunction::zeros(g, NormTag::L1));
    const GridFunction y =
        GridFunction::sample(g, NormTag::Sup, [](double x) { return 2.0 + std::cos(kPi * x); });
    const FbcResult r = f_bc_limsup(S.generator(), op, y);
    const double n2 = norm(y) * norm(y);
    CHECK(r.converged);
    CHECK(std::abs(r.value - n2) <= 1e-4 * n2);
  }

  SUBCASE("multiplication model matches the direct pairing within 1e-6 relative") {
    const Grid g(0.0, 8.0, 640);
    const SemigroupModel S = SemigroupModel::right_shift(g);
    const ControlOperatorModel op = ControlOperatorModel::multiplication(exp_profile(g));
    const GridFunction y = GridFunction::sample(g, NormTag::L1, [](double x) {
      const double d = std::abs(x - 2.5);
      return d < 1.5 ? 1.0 + std::cos(kPi * d / 1.5) : 0.0;
    });
    const FbcResult r = f_bc_limsup(S.generator(), op, y);
    const double direct = x_part_pairing(op, y);
    CHECK(std::abs(r.value - direct) <= 1e-6 * std::abs(direct));
  }

  SUBCASE("2-homogeneity: f(c y) = c^2 f(y) for c > 0") {
    const Grid g(0.0, 5.0, 250);
    const SemigroupModel S = SemigroupModel::right_shift(g);
    const ControlOperatorModel op = ControlOperatorModel::multiplication(exp_profile(g));
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const GridFunction y = random_state(rng, g, NormTag::L1);
      if (norm(y) == 0.0) continue;
      const double c = rng.uniform(0.1, 4.0);
      const double f1 = f_bc_limsup(S.generator(), op, y).value;
      const double f2 = f_bc_limsup(S.generator(), op, scaled(y, c)).value;
      CHECK(f2 == doctest::Approx(c * c * f1).epsilon(1e-9).scale(std::abs(f1) + 1e-30));
    }
  }
}

TEST_CASE("A-boundedness estimates") {
  SUBCASE("multiplication bound <= ||k||_1 on shift-domain samples") {
    const Grid g(0.0, 8.0, 400);
    const SemigroupModel S = SemigroupModel::right_shift(g);
    const ControlOperatorModel op = ControlOperatorModel::multiplication(exp_profile(g));
    SampleSpec spec{50, 55, SampleFamily::Mixed};
    const auto samples = make_samples(spec, g, NormTag::L1, SampleBC::LeftZero, g.length());
    const double bound = check_a_boundedness(op, S.generator(), samples);
    CHECK(bound > 0.0);
    CHECK(bound <= 0.5);
  }

  SUBCASE("identity-plus-derivative bound <= 2 on heat-domain samples") {
    const Grid g(0.0, 1.0, 200);
    const SemigroupModel S = SemigroupModel::heat_neumann(g, 0.005, HeatScheme::ImplicitEuler);
    const ControlOperatorModel op = ControlOperatorModel::identity_plus_derivative();
    SampleSpec spec{50, 56, SampleFamily::SmoothModes};
    const auto samples = make_samples(spec, g, NormTag::Sup, SampleBC::Neumann, g.length());
    const double bound = check_a_boundedness(op, S.generator(), samples);
    CHECK(bound > 0.0);
    CHECK(bound <= 2.0);
  }

  SUBCASE("zero operator gives 0") {
    const Grid g(0.0, 1.0, 100);
    const SemigroupModel S = SemigroupModel::heat_neumann(g, 0.01, HeatScheme::ImplicitEuler);
    SampleSpec spec{10, 57, SampleFamily::Bumps};
    const auto samples = make_samples(spec, g, NormTag::Sup, SampleBC::None, g.length());
    CHECK(check_a_boundedness(ControlOperatorModel::zero(), S.generator(), samples) == 0.0);
  }
}

TEST_CASE("example 2 admissibility integrand: int ||k S(t)y|| dt <= ||k|| ||y||") {
  const Grid g(0.0, 10.0, 1000);
  const SemigroupModel S = SemigroupModel::right_shift(g);
  const GridFunction k = exp_profile(g);
  const ControlOperatorModel op = ControlOperatorModel::multiplication(k);
  const double k_l1 = op.k_l1_norm();
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction y = random_state(rng, g, NormTag::L1);
    const double T = 3.0;
    const int n_t = static_cast<int>(T / g.dx());
    OrbitWalker walker(S, y, g.dx());
    double integral = 0.0;
    for (int j = 0; j < n_t; ++j) {
      integral += g.dx() * op.observation_norm(walker.state());
      walker.advance();
    }
    CHECK(integral <= k_l1 * norm(y) * (1.0 + 1e-12));
  }
}
