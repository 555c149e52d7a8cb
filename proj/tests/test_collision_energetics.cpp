#include <doctest.h>

#include <cmath>

#include "qprobe/collision_energetics.hpp"
#include "qprobe/cross_sections.hpp"
#include "qprobe/quadrature.hpp"
#include "qprobe/units.hpp"

using namespace qprobe;

TEST_SUITE_BEGIN("collision_energetics");

TEST_CASE("collision-energy density normalizes and has mean 3/2 kT") {
  const Temperature t = Temperature::from_nK(400.0);
  const double kt = constants::k_boltzmann * t.kelvin;
  const double norm = integrate_adaptive(
      [&](double e) { return mb_pdf(e, t); }, 1e-40, 60.0 * kt, 1e-11);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  const double mean = integrate_adaptive(
      [&](double e) { return e * mb_pdf(e, t); }, 1e-40, 60.0 * kt, 1e-11);
  CHECK(mean == doctest::Approx(1.5 * kt).epsilon(1e-9));
}

TEST_CASE("collision-energy density rejects degenerate input") {
  CHECK_THROWS_AS(mb_pdf(1e-30, Temperature(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(mb_pdf(-1e-30, Temperature::from_nK(400.0)),
                  std::invalid_argument);
}

TEST_CASE("endoergic fraction closed form at reference points") {
  // Values frozen from an independent high-precision evaluation of
  // erfc(sqrt(a)) + 2 sqrt(a/pi) exp(-a).
  CHECK(endoergic_fraction(MagneticField::from_mG(10.0),
                           Temperature::from_nK(366.0)) ==
        doctest::Approx(0.821168478216716).epsilon(1e-12));
  CHECK(endoergic_fraction(MagneticField::from_mG(25.0),
                           Temperature::from_nK(366.0)) ==
        doctest::Approx(0.513651257240269).epsilon(1e-12));
  CHECK(endoergic_fraction(MagneticField::from_mG(60.0),
                           Temperature::from_nK(366.0)) ==
        doctest::Approx(0.138289084441496).epsilon(1e-12));
  CHECK(endoergic_fraction(MagneticField::from_mG(10.0),
                           Temperature::from_nK(400.0)) ==
        doctest::Approx(0.839963493139495).epsilon(1e-12));
}

TEST_CASE("endoergic fraction limits") {
  CHECK(endoergic_fraction(MagneticField(0.0), Temperature::from_nK(400.0)) ==
        1.0);
  CHECK(endoergic_fraction(MagneticField::from_mG(10.0), Temperature(0.0)) ==
        0.0);
  // Monotone decreasing in B, increasing in T.
  const Temperature t = Temperature::from_nK(366.0);
  double prev = 1.0;
  for (double b_mG = 5.0; b_mG <= 100.0; b_mG += 5.0) {
    const double p = endoergic_fraction(MagneticField::from_mG(b_mG), t);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("closed form matches quadrature") {
  for (double b_mG : {0.5, 5.0, 20.0, 60.0, 100.0}) {
    for (double t_nK : {50.0, 366.0, 1000.0, 2000.0}) {
      const MagneticField b = MagneticField::from_mG(b_mG);
      const Temperature t = Temperature::from_nK(t_nK);
      CHECK(endoergic_fraction(b, t) ==
            doctest::Approx(endoergic_fraction_numeric(b, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("thermal average of a flat cross section is the prefactor") {
  const SyntheticProvider provider(SyntheticModel(2.5e-16, 2.5e-16, 0.5));
  const CollisionChannel exo(SpinState(1), SpinExchangeDirection::kExoergic);
  CHECK(thermal_average_sigma(provider, exo, MagneticField::from_mG(25.0),
                              Temperature::from_nK(366.0)) ==
        doctest::Approx(2.5e-16).epsilon(1e-9));
}

TEST_CASE("step threshold model averages to sigma0 p(B,T)") {
  // Exponent 0 turns the endoergic cross section into a step at threshold,
  // so its thermal average is sigma0 times the endoergic fraction.
  const SyntheticProvider provider(SyntheticModel(3e-16, 3e-16, 0.0));
  const CollisionChannel endo(SpinState(1), SpinExchangeDirection::kEndoergic);
  const MagneticField b = MagneticField::from_mG(25.0);
  const Temperature t = Temperature::from_nK(366.0);
  CHECK(thermal_average_sigma(provider, endo, b, t) ==
        doctest::Approx(3e-16 * endoergic_fraction(b, t)).epsilon(1e-8));
}

TEST_CASE("thermal average honors a finite provider domain") {
  // A table whose energy grid stops far below the thermal window truncates
  // the average; a zero-width domain contributes nothing.
  struct Narrow : CrossSectionProvider {
    bool has_channel(CollisionChannel) const override { return true; }
    double sigma(CollisionChannel, MagneticField, double) const override {
      return 1e-16;
    }
    std::pair<double, double> energy_domain(CollisionChannel,
                                            MagneticField) const override {
      return {0.0, 0.0};
    }
  } narrow;
  const CollisionChannel exo(SpinState(1), SpinExchangeDirection::kExoergic);
  CHECK(thermal_average_sigma(narrow, exo, MagneticField::from_mG(10.0),
                              Temperature::from_nK(400.0)) == 0.0);
}

TEST_SUITE_END();
