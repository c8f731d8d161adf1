#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ym/errors.hpp"
#include "ym/families.hpp"
#include "ym/function_model.hpp"
#include "ym/relaxation.hpp"

using namespace ym;

namespace {

// sin(2 pi x) restricted to (0, 1/4).
Piece rising_sine() { return Piece::sine({0.0, 0.25}, 1.0, 1.0, 0.0); }

Piece doubling() { return Piece::affine({0.0, 0.5}, 2.0, 0.0); }

// Frozen from oracle::bisect on sin(2 pi x) = 1/2 over (0, 1/4).
constexpr double kSineHalfPreimage = 1.0 / 12.0;
// Frozen from a difference quotient of the bisection inverse at y = 0.
constexpr double kSineInverseSlopeAtZero = 0.15915494309189535;

}  // namespace

TEST_CASE("oracle: frozen sine inversion values") {
  const oracle::Fn s = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  CHECK(oracle::bisect(s, 0.0, 0.25, 0.5) == doctest::Approx(kSineHalfPreimage).epsilon(1e-12));
  // The inverse is odd about y = 0, so a one-sided quotient is second order.
  const double h = 1e-6;
  const double fd = (oracle::bisect(s, 0.0, 0.25, h) - oracle::bisect(s, 0.0, 0.25, 0.0)) / h;
  CHECK(fd == doctest::Approx(kSineInverseSlopeAtZero).epsilon(1e-8));
}

TEST_CASE("Domain1D") {
  const Domain1D d(-1.0, 3.0);
  CHECK(d.measure() == 4.0);
  CHECK(d.contains(0.0));
  CHECK_FALSE(d.contains(-1.0));
  CHECK_FALSE(d.contains(3.0));
  CHECK_THROWS_AS(Domain1D(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Domain1D(2.0, 1.0), DomainError);
}

TEST_CASE("validate accepts well-formed functions") {
  const MOscillatingFunction f(Domain1D(0.0, 1.0), {Piece::affine({0.0, 1.0}, 2.0, 0.0)});
  const ValidationReport r = validate(f);
  CHECK(r.valid);
  CHECK(r.violations.empty());
  for (const MOscillatingFunction& g :
       {families::identity(), families::tent(), families::sine_wave(3), families::roubicek(2),
        families::ramp_then_constant(), families::amplitude_tent_member(5),
        relaxation::sawtooth(3), families::constant_function(0.3)}) {
    const ValidationReport rg = validate(g);
    INFO(rg.violations.size());
    CHECK(rg.valid);
  }
}

TEST_CASE("validate reports overlapping subintervals") {
  const MOscillatingFunction f(Domain1D(0.0, 1.0), {Piece::affine({0.0, 0.6}, 1.0, 0.0),
                                                    Piece::affine({0.4, 1.0}, 1.0, 0.0)});
  const ValidationReport r = validate(f);
  CHECK_FALSE(r.valid);
  CHECK(r.has("overlapping_subintervals"));
}

TEST_CASE("validate reports a non-monotone piece") {
  const MOscillatingFunction f(
      Domain1D(0.0, 0.5),
      {Piece::expression({0.0, 0.5}, [](double x) { return std::sin(2.0 * std::numbers::pi * x); },
                         "sin(2 pi x)")});
  const ValidationReport r = validate(f);
  CHECK_FALSE(r.valid);
  REQUIRE(r.has("non_monotone_piece"));
  for (const Violation& v : r.violations)
    if (v.code == "non_monotone_piece") CHECK(v.piece == 0);
}

TEST_CASE("validate reports gaps, stray pieces and bad closed forms") {
  const MOscillatingFunction gap(Domain1D(0.0, 1.0), {Piece::affine({0.0, 0.4}, 1.0, 0.0),
                                                      Piece::affine({0.6, 1.0}, 1.0, 0.0)});
  CHECK(validate(gap).has("coverage_gap"));

  const MOscillatingFunction stray(Domain1D(0.0, 1.0), {Piece::affine({0.0, 1.2}, 1.0, 0.0)});
  CHECK(validate(stray).has("outside_domain"));

  const Piece wrong_inverse = Piece::diffeomorphic(
      {0.0, 1.0}, [](double x) { return 2.0 * x; }, [](double y) { return y; },
      [](double) { return 0.5; });
  CHECK(validate(MOscillatingFunction(Domain1D(0.0, 1.0), {wrong_inverse})).has("inverse_mismatch"));

  const Piece wrong_slope = Piece::diffeomorphic(
      {0.0, 1.0}, [](double x) { return 2.0 * x; }, [](double y) { return y / 2.0; },
      [](double) { return 1.0; });
  CHECK(validate(MOscillatingFunction(Domain1D(0.0, 1.0), {wrong_slope}))
            .has("inverse_derivative_mismatch"));

  const MOscillatingFunction bad_range(Domain1D(0.0, 1.0), {Piece::affine({0.0, 1.0}, 1.0, 0.0)},
                                       Interval{0.0, 3.0});
  CHECK(validate(bad_range).has("range_mismatch"));
}

TEST_CASE("evaluate") {
  const MOscillatingFunction tent = families::tent();
  CHECK(evaluate(tent, 0.25) == 0.5);
  CHECK(evaluate(tent, 0.75) == 0.5);
  CHECK(evaluate(relaxation::sawtooth(1), 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(evaluate(tent, 0.0), DomainError);
  CHECK_THROWS_AS(evaluate(tent, 1.5), DomainError);
}

TEST_CASE("piece boundaries belong to the left piece") {
  const MOscillatingFunction f(Domain1D(0.0, 1.0), {Piece::affine({0.0, 0.5}, 0.0 + 2.0, 0.0),
                                                    Piece::constant({0.5, 1.0}, 7.0)});
  CHECK(locate_piece(f, 0.5) == 0);
  CHECK(evaluate(f, 0.5) == 1.0);
  CHECK(locate_piece(f, 0.5000001) == 1);
}

TEST_CASE("invert_piece") {
  CHECK(invert_piece(doubling(), 0.7) == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(invert_piece(rising_sine(), 0.5) == doctest::Approx(kSineHalfPreimage).epsilon(1e-10));
  CHECK_THROWS_AS(invert_piece(doubling(), 1.5), RangeError);
  CHECK_THROWS_AS(invert_piece(Piece::constant({0.0, 1.0}, 2.0), 2.0), KindError);

  const Piece numeric = rising_sine().without_closed_forms();
  CHECK(std::abs(invert_piece(numeric, 0.5, 1e-12) - kSineHalfPreimage) <= 1e-11);
}

TEST_CASE("inverse_slope") {
  CHECK(inverse_slope(doubling(), 0.3) == 0.5);
  CHECK(inverse_slope(rising_sine(), 0.0) == doctest::Approx(kSineInverseSlopeAtZero).epsilon(1e-12));
  CHECK_THROWS_AS(inverse_slope(rising_sine(), 1.0), SingularSlopeError);
  try {
    (void)inverse_slope(rising_sine(), 1.0);
  } catch (const SingularSlopeError& e) {
    CHECK(e.y() == 1.0);
  }
  const Piece numeric = rising_sine().without_closed_forms();
  CHECK(inverse_slope(numeric, 0.0) ==
        doctest::Approx(kSineInverseSlopeAtZero).epsilon(1e-6));
  CHECK_THROWS_AS(inverse_slope(numeric, 1.0), SingularSlopeError);
}

TEST_CASE("power and decreasing sine pieces") {
  const Piece cube = Piece::power({-1.0, 2.0}, 3.0);
  CHECK(cube.forward(-1.0) == -1.0);
  CHECK(cube.image() == Interval{-1.0, 8.0});
  CHECK(invert_piece(cube, 8.0) == doctest::Approx(2.0));
  CHECK(inverse_slope(cube, 8.0) == doctest::Approx(1.0 / 12.0));

  const Piece falling = Piece::sine({0.25, 0.75}, 1.0, 1.0, 0.0);
  CHECK(falling.image() == Interval{-1.0, 1.0});
  CHECK(invert_piece(falling, 0.0) == doctest::Approx(0.5));
  CHECK(inverse_slope(falling, 0.0) == doctest::Approx(kSineInverseSlopeAtZero));
  const MOscillatingFunction hump(Domain1D(0.0, 0.5), {Piece::sine({0.0, 0.5}, 1.0, 1.0, 0.0)});
  CHECK(validate(hump).has("non_monotone_piece"));
}

TEST_CASE("property: inversion round trip") {
  const std::vector<MOscillatingFunction> fs = {
      families::tent(), families::sine_wave(2), families::roubicek(3), relaxation::sawtooth(2),
      families::sine_wave(1).without_closed_forms(), families::amplitude_tent(2.0)};
  for (const MOscillatingFunction& f : fs) {
    for (const Piece& p : f.pieces()) {
      if (p.is_constant()) continue;
      for (int k = 0; k <= 32; ++k) {
        const double y = p.image().lo + p.image().length() * k / 32.0;
        const double x = invert_piece(p, y, 1e-10);
        CHECK(std::abs(p.forward(x) - y) <= 1e-9);
        CHECK(p.subinterval().contains(x));
      }
    }
  }
}

TEST_CASE("property: inverse slope matches a difference quotient of the inverse") {
  const std::vector<Piece> pieces = {
      rising_sine(), Piece::sine({0.25, 0.75}, 1.0, 1.0, 0.0), Piece::power({0.5, 2.0}, 2.5),
      rising_sine().without_closed_forms(), Piece::power({0.5, 2.0}, 2.5).without_closed_forms()};
  for (const Piece& p : pieces) {
    const Interval im = p.image();
    for (int k = 1; k < 16; ++k) {
      const double y = im.lo + im.length() * (0.05 + 0.9 * k / 16.0);
      const double h = 1e-5 * im.length();
      const double fd =
          std::abs(invert_piece(p, y + h, 1e-14) - invert_piece(p, y - h, 1e-14)) / (2.0 * h);
      INFO(p.label() << " y=" << y);
      CHECK(std::abs(inverse_slope(p, y) - fd) <= 1e-6 * fd);
    }
  }
}

TEST_CASE("property: piece lengths partition the domain") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const MOscillatingFunction& f :
         {families::sine_wave(n), families::roubicek(n), relaxation::sawtooth(n),
          families::multi_tent(n, 1.5)}) {
      REQUIRE(validate(f).valid);
      double total = 0.0;
      for (const Piece& p : f.pieces()) total += p.length();
      CHECK(total == doctest::Approx(f.domain().measure()).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: validate flags every sign change of the forward differences") {
  for (double freq : {0.6, 1.0, 2.0, 3.5}) {
    const MOscillatingFunction f(
        Domain1D(0.0, 1.0),
        {Piece::expression(
            {0.0, 1.0}, [freq](double x) { return std::cos(2.0 * std::numbers::pi * freq * x); },
            "cos")});
    CHECK(validate(f).has("non_monotone_piece"));
  }
  const MOscillatingFunction mono(
      Domain1D(0.0, 1.0), {Piece::expression({0.0, 1.0}, [](double x) { return x * x * x + x; }, "p")});
  CHECK(validate(mono).valid);
}

TEST_CASE("Roubicek partition") {
  const MOscillatingFunction f = families::roubicek(2, 8);
  REQUIRE(f.pieces().size() == 9);
  CHECK(f.pieces()[0].subinterval() == Interval{0.0, 1.0 / 3.0});
  CHECK(f.pieces()[1].subinterval().hi == doctest::Approx(0.5));
  CHECK(f.pieces()[0].image() == Interval{0.0, 1.0});
  CHECK(*f.pieces()[1].affine_slope() < 0.0);
  CHECK(f.pieces().back().subinterval().hi == 1.0);
}
