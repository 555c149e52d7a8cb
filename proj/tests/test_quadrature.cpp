#include <doctest.h>

#include <cmath>

#include "qprobe/quadrature.hpp"

using namespace qprobe;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("polynomial integrals are exact") {
  CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return 3.0 * x * x - 2.0 * x; },
                           -1.0, 2.0) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("transcendental integrals") {
  const double pi = 3.14159265358979323846;
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sharply peaked integrand") {
  // Gaussian of width 1e-2 centred inside the interval.
  const double w = 1e-2;
  const double pi = 3.14159265358979323846;
  auto f = [&](double x) {
    const double z = (x - 0.3) / w;
    return std::exp(-z * z);
  };
  CHECK(integrate_adaptive(f, 0.0, 1.0, 1e-12) ==
        doctest::Approx(w * std::sqrt(pi)).epsilon(1e-10));
}

TEST_CASE("degenerate and reversed intervals") {
  CHECK(integrate_adaptive([](double x) { return x; }, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0),
                  std::invalid_argument);
}

TEST_SUITE_END();
