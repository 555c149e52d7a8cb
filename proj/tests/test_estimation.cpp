#include <doctest.h>

#include <array>
#include <cmath>

#include "qprobe/estimation.hpp"

using namespace qprobe;

namespace {

SpinDistribution two_level(double theta) {
  std::array<double, kNumSpinStates> p{};
  p[0] = theta;
  p[1] = 1.0 - theta;
  return SpinDistribution(p);
}

MeasuredPopulations half_half_data(double sigma_active) {
  std::array<double, kNumSpinStates> p{};
  std::array<double, kNumSpinStates> s{};
  p[0] = 0.5;
  p[1] = 0.5;
  s.fill(1e3);  // effectively unconstrained states
  s[0] = sigma_active;
  s[1] = sigma_active;
  return MeasuredPopulations(p, s);
}

}  // namespace

TEST_SUITE_BEGIN("estimation");

TEST_CASE("measured populations validation") {
  std::array<double, kNumSpinStates> p{};
  std::array<double, kNumSpinStates> s{};
  s.fill(0.1);
  CHECK_NOTHROW(MeasuredPopulations(p, s));
  p[0] = 1.2;
  CHECK_THROWS_AS(MeasuredPopulations(p, s), std::invalid_argument);
  p[0] = 0.5;
  s[3] = 0.0;
  CHECK_THROWS_AS(MeasuredPopulations(p, s), std::invalid_argument);
}

TEST_CASE("reduced chi-square value") {
  const MeasuredPopulations data = half_half_data(0.1);
  // Model exactly on the data: zero residual.
  CHECK(chi2_nu(data, two_level(0.5)) == doctest::Approx(0.0).epsilon(1e-12));
  // Known offset: two residuals of 0.1/0.1 = 1 each, nu = 7.
  CHECK(chi2_nu(data, two_level(0.6)) ==
        doctest::Approx(2.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("quadratic fit recovers the truth with exact error bars") {
  const MeasuredPopulations data = half_half_data(0.1);
  const EstimateResult r = estimate(data, two_level, 0.2, 0.8);

  CHECK(r.theta_hat == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r.chi2_min == doctest::Approx(0.0).epsilon(1e-8));
  // chi2_nu(theta) = (2/7) (theta - 1/2)^2 / sigma^2; the +1 crossing of
  // the reduced statistic sits at delta = sigma sqrt(7/2).
  const double half_width = 0.1 * std::sqrt(3.5);
  CHECK(r.err_minus == doctest::Approx(0.5 - half_width).epsilon(1e-3));
  CHECK(r.err_plus == doctest::Approx(0.5 + half_width).epsilon(1e-3));
  CHECK_FALSE(r.minus_clamped);
  CHECK_FALSE(r.plus_clamped);
  CHECK(r.chi2_curve.size() >= 64);
}

TEST_CASE("textbook convention narrows the interval by sqrt(nu)") {
  const MeasuredPopulations data = half_half_data(0.1);
  EstimateOptions options;
  options.convention = ErrorBarConvention::kUnreducedPlusOne;
  const EstimateResult r = estimate(data, two_level, 0.2, 0.8, options);
  const double half_width = 0.1 / std::sqrt(2.0);
  CHECK(r.err_plus == doctest::Approx(0.5 + half_width).epsilon(1e-3));
  CHECK(r.err_minus == doctest::Approx(0.5 - half_width).epsilon(1e-3));
}

TEST_CASE("log-spaced scan grid") {
  const MeasuredPopulations data = half_half_data(0.05);
  EstimateOptions options;
  options.log_spaced = true;
  const EstimateResult r = estimate(data, two_level, 0.2, 0.8, options);
  CHECK(r.theta_hat == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(estimate(data, two_level, -0.1, 0.8, options),
                  std::invalid_argument);
}

TEST_CASE("boundary minima are rejected, unreachable crossings clamped") {
  std::array<double, kNumSpinStates> p{};
  std::array<double, kNumSpinStates> s{};
  p[0] = 0.9;
  p[1] = 0.1;
  s.fill(1e3);
  s[0] = s[1] = 0.1;
  const MeasuredPopulations data(p, s);
  // True optimum 0.9 sits above the scan range: the grid minimum lands on
  // the right edge.
  CHECK_THROWS_AS(estimate(data, two_level, 0.2, 0.5), std::runtime_error);

  // Narrow range around the optimum: the Delta chi^2 crossings fall outside
  // and the bounds are clamped to the range edges.
  const MeasuredPopulations centred = half_half_data(0.1);
  const EstimateResult r = estimate(centred, two_level, 0.45, 0.55);
  CHECK(r.minus_clamped);
  CHECK(r.plus_clamped);
  CHECK(r.err_minus == 0.45);
  CHECK(r.err_plus == 0.55);
}

TEST_CASE("systematic shift from field uncertainty") {
  const MeasuredPopulations data = half_half_data(0.05);
  const double b_ref = 1e-6;
  // The model's best theta scales as b_ref/b, so fits at b0 +- dB spread.
  auto model = [&](double theta, double b) {
    return two_level(theta * b / b_ref);
  };
  CHECK(systematic_field_shift(data, model, 0.2, 0.8, MagneticField(b_ref),
                               0.0) == 0.0);
  const double shift = systematic_field_shift(
      data, model, 0.2, 0.8, MagneticField(b_ref), 0.1 * b_ref);
  const double expected = 0.5 * (0.5 / 0.9 - 0.5 / 1.1);
  CHECK(shift == doctest::Approx(expected).epsilon(1e-3));
}

TEST_SUITE_END();
