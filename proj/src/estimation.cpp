#include "qprobe/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qprobe {
namespace {

constexpr double kGoldenRatio = 0.6180339887498949;

double golden_section(const std::function<double(double)>& f, double a,
                      double b, double rel_tol) {
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  const double scale = std::max(std::abs(a), std::abs(b));
  while (b - a > rel_tol * scale) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Root of f(x) = target on [a, b], assuming f(a) and f(b) bracket it.
double bisect(const std::function<double(double)>& f, double a, double b,
              double target, double rel_tol) {
  double fa = f(a) - target;
  const double scale = std::max(std::abs(a), std::abs(b));
  while (std::abs(b - a) > rel_tol * scale) {
    const double m = 0.5 * (a + b);
    const double fm = f(m) - target;
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

MeasuredPopulations::MeasuredPopulations(
    const std::array<double, kNumSpinStates>& p,
    const std::array<double, kNumSpinStates>& sigma)
    : p_exp(p), sigma_exp(sigma) {
  for (std::size_t i = 0; i < kNumSpinStates; ++i) {
    if (!(p_exp[i] >= 0.0) || !(p_exp[i] <= 1.0))
      throw std::invalid_argument(
          "MeasuredPopulations: populations must lie in [0, 1]");
    if (!(sigma_exp[i] > 0.0))
      throw std::invalid_argument(
          "MeasuredPopulations: uncertainties must be > 0");
  }
}

double chi2_nu(const MeasuredPopulations& data,
               const SpinDistribution& model) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumSpinStates; ++i) {
    const double r = (data.p_exp[i] - model.at_index(i)) / data.sigma_exp[i];
    sum += r * r;
  }
  return sum / static_cast<double>(kNumSpinStates);
}

EstimateResult estimate(const MeasuredPopulations& data,
                        const PopulationMap& model_map, double theta_lo,
                        double theta_hi, const EstimateOptions& options) {
  if (!(theta_hi > theta_lo))
    throw std::invalid_argument("estimate: empty theta range");
  if (options.log_spaced && !(theta_lo > 0.0))
    throw std::invalid_argument("estimate: log grid requires theta_lo > 0");
  const std::size_t n = std::max<std::size_t>(options.grid_points, 64);

  auto objective = [&](double theta) {
    return chi2_nu(data, model_map(theta));
  };

  EstimateResult result;
  result.chi2_curve.reserve(n);
  std::size_t best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
    const double theta =
        options.log_spaced
            ? theta_lo * std::pow(theta_hi / theta_lo, frac)
            : theta_lo + frac * (theta_hi - theta_lo);
    result.chi2_curve.emplace_back(theta, objective(theta));
    if (result.chi2_curve[k].second < result.chi2_curve[best].second)
      best = k;
  }
  if (best == 0 || best == n - 1)
    throw std::runtime_error("estimate: minimum not bracketed");

  result.theta_hat = golden_section(objective, result.chi2_curve[best - 1].first,
                                    result.chi2_curve[best + 1].first,
                                    options.refine_rel_tol);
  result.chi2_min = objective(result.theta_hat);

  const double delta =
      options.convention == ErrorBarConvention::kReducedPlusOne
          ? 1.0
          : 1.0 / static_cast<double>(kNumSpinStates);
  const double target = result.chi2_min + delta;

  if (objective(theta_lo) >= target) {
    result.err_minus = bisect(objective, theta_lo, result.theta_hat, target,
                              options.refine_rel_tol);
  } else {
    result.err_minus = theta_lo;
    result.minus_clamped = true;
  }
  if (objective(theta_hi) >= target) {
    result.err_plus = bisect(objective, result.theta_hat, theta_hi, target,
                             options.refine_rel_tol);
  } else {
    result.err_plus = theta_hi;
    result.plus_clamped = true;
  }
  return result;
}

double systematic_field_shift(
    const MeasuredPopulations& data,
    const std::function<SpinDistribution(double, double)>& model_map,
    double theta_lo, double theta_hi, MagneticField b0, double db_tesla,
    const EstimateOptions& options) {
  if (!(db_tesla >= 0.0))
    throw std::invalid_argument("systematic_field_shift: dB must be >= 0");
  if (db_tesla == 0.0) return 0.0;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double b : {b0.tesla - db_tesla, b0.tesla, b0.tesla + db_tesla}) {
    auto map_at_b = [&](double theta) { return model_map(theta, b); };
    const EstimateResult r =
        estimate(data, map_at_b, theta_lo, theta_hi, options);
    lo = std::min(lo, r.theta_hat);
    hi = std::max(hi, r.theta_hat);
  }
  return 0.5 * (hi - lo);
}

}  // namespace qprobe
