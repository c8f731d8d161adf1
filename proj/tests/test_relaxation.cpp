#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ym/errors.hpp"
#include "ym/convergence.hpp"
#include "ym/families.hpp"
#include "ym/function_model.hpp"
#include "ym/relaxation.hpp"

using namespace ym;
using relaxation::sawtooth;

namespace {

// Frozen from oracle::simpson of the unit sawtooth squared over (0, 1).
constexpr double kSawtoothSquareIntegral = 1.0 / 48.0;
// Frozen from oracle::midpoint of the arcsine pdf times y^2 over (-1, 1).
constexpr double kArcsineSecondMoment = 0.5;

double unit_sawtooth(double x) {
  if (x < 0.25) return x;
  if (x < 0.75) return 0.5 - x;
  return x - 1.0;
}

ScalarMeasureRCA two_point() {
  ScalarMeasureRCA m;
  m.range = {-1.0, 1.0};
  m.atoms = AtomList({{-1.0, 0.5}, {1.0, 0.5}});
  return m;
}

ScalarMeasureRCA arcsine_measure() {
  ScalarMeasureRCA m;
  m.density = families::arcsine_density();
  m.range = m.density->support();
  return m;
}

const RealMap kOne = [](double) { return 1.0; };

}  // namespace

TEST_CASE("oracle: frozen relaxation integrals") {
  double s = 0.0;
  // Split at the kinks so Simpson sees smooth cells.
  const oracle::Fn sq = [](double x) { return unit_sawtooth(x) * unit_sawtooth(x); };
  s += oracle::simpson(sq, 0.0, 0.25, 2000);
  s += oracle::simpson(sq, 0.25, 0.75, 2000);
  s += oracle::simpson(sq, 0.75, 1.0, 2000);
  CHECK(s == doctest::Approx(kSawtoothSquareIntegral).epsilon(1e-12));

  const double m2 = oracle::midpoint(
      [](double y) { return y * y * oracle::arcsine_pdf(y); }, -1.0, 1.0, 2000000);
  CHECK(m2 == doctest::Approx(kArcsineSecondMoment).epsilon(1e-3));
}

TEST_CASE("sawtooth examples") {
  CHECK(evaluate(sawtooth(1), 0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(evaluate(sawtooth(1), 0.5)) <= 1e-15);

  const MOscillatingFunction u4 = sawtooth(4);
  double peak = 0.0;
  for (int k = 1; k < 4096; ++k) peak = std::max(peak, std::abs(evaluate(u4, k / 4096.0)));
  CHECK(peak == doctest::Approx(0.0625).epsilon(1e-12));

  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const MOscillatingFunction u = sawtooth(n);
    CHECK(validate(u).valid);
    CHECK(u.pieces().size() == 3 * n);
    for (const Piece& p : u.pieces()) {
      REQUIRE(p.affine_slope());
      CHECK(std::abs(*p.affine_slope()) == 1.0);
    }
  }
  CHECK_THROWS_AS(sawtooth(0), ConstructionError);
}

TEST_CASE("sawtooth agrees with the rescaled base profile") {
  for (std::size_t n : {1u, 3u, 8u}) {
    const MOscillatingFunction u = sawtooth(n);
    const double nn = static_cast<double>(n);
    for (int k = 1; k < 500; ++k) {
      const double x = k / 500.0 + 1e-4;
      if (x >= 1.0) continue;
      const double t = nn * x - std::floor(nn * x);
      CHECK(evaluate(u, x) == doctest::Approx(unit_sawtooth(t) / nn).epsilon(1e-12));
    }
  }
}

TEST_CASE("bolza_functional examples") {
  CHECK(relaxation::bolza_functional(sawtooth(1)) ==
        doctest::Approx(kSawtoothSquareIntegral).epsilon(1e-10));
  CHECK(relaxation::bolza_functional(sawtooth(4)) == doctest::Approx(1.0 / 768.0).epsilon(1e-10));
  CHECK(relaxation::bolza_functional(families::constant_function(0.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bolza_functional on a non-affine profile") {
  // u = x^2 / 2 on (0, 1): int x^4/4 + (x^2 - 1)^2 dx = 1/20 + 8/15.
  const MOscillatingFunction u(
      Domain1D(0.0, 1.0),
      {Piece::expression({0.0, 1.0}, [](double x) { return 0.5 * x * x; }, "x^2/2")});
  const double exact = 1.0 / 20.0 + 8.0 / 15.0;
  CHECK(relaxation::bolza_functional(u) == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("gradient_young_measure examples") {
  for (std::size_t n : {1u, 7u}) {
    const ScalarMeasureRCA nu = relaxation::gradient_young_measure(sawtooth(n));
    REQUIRE(nu.atoms.size() == 2);
    CHECK(nu.atoms.atoms()[0].location == -1.0);
    CHECK(nu.atoms.atoms()[1].location == 1.0);
    CHECK(nu.atoms.atoms()[0].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nu.atoms.atoms()[1].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(nu.density);
  }
  const ScalarMeasureRCA id = relaxation::gradient_young_measure(families::identity());
  REQUIRE(id.atoms.size() == 1);
  CHECK(id.atoms.atoms()[0].location == 1.0);
  CHECK(id.atoms.atoms()[0].weight == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(relaxation::gradient_young_measure(families::sine_wave(1)), UnsupportedError);
}

TEST_CASE("relaxed_value examples") {
  CHECK(std::abs(relaxation::relaxed_value(
            two_point(), [](double s) { return (s * s - 1.0) * (s * s - 1.0); }, kOne)) <= 1e-15);
  CHECK(relaxation::relaxed_value(arcsine_measure(), [](double s) { return s * s; }, kOne) ==
        doctest::Approx(kArcsineSecondMoment).epsilon(1e-8));
  CHECK(std::abs(relaxation::relaxed_value(two_point(), [](double s) { return s; }, kOne)) <= 1e-15);
  // The weight factorizes out in the homogeneous case.
  CHECK(relaxation::relaxed_value(two_point(), [](double s) { return s * s; },
                                  [](double x) { return 3.0 * x * x; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: J(u_n) = 1/(48 n^2)") {
  const double quad_tol = 1e-9;
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const double nn = static_cast<double>(n);
    const double predicted = 1.0 / (48.0 * nn * nn);
    CHECK(std::abs(relaxation::bolza_functional(sawtooth(n), quad_tol) - predicted) <=
          10.0 * quad_tol);
  }
}

TEST_CASE("property: gradient Young measure does not depend on n") {
  const ScalarMeasureRCA ref = relaxation::gradient_young_measure(sawtooth(1));
  for (std::size_t n = 2; n <= 24; ++n) {
    const ScalarMeasureRCA nu = relaxation::gradient_young_measure(sawtooth(n));
    REQUIRE(nu.atoms.size() == ref.atoms.size());
    for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
      CHECK(nu.atoms.atoms()[i].location == ref.atoms.atoms()[i].location);
      CHECK(std::abs(nu.atoms.atoms()[i].weight - ref.atoms.atoms()[i].weight) <= 1e-12);
    }
  }
}

TEST_CASE("property: gradient functionals equal the relaxed value") {
  const std::vector<RealMap> tests = {
      [](double s) { return s; }, [](double s) { return s * s; },
      [](double s) { return (s * s - 1.0) * (s * s - 1.0); }, [](double s) { return std::abs(s); }};
  for (const RealMap& phi : tests) {
    const double limit = relaxation::relaxed_value(two_point(), phi, kOne);
    for (std::size_t n : {1u, 2u, 3u, 8u, 16u}) {
      CHECK(std::abs(relaxation::gradient_functional(sawtooth(n), phi, kOne) - limit) <= 1e-9);
    }
  }
}

TEST_CASE("property: sawtooth vanishes at both ends") {
  for (std::size_t n : {1u, 4u, 13u}) {
    const MOscillatingFunction u = sawtooth(n);
    CHECK(std::abs(evaluate(u, 1e-12)) <= 1e-9);
    CHECK(std::abs(evaluate(u, 1.0 - 1e-12)) <= 1e-9);
  }
}
