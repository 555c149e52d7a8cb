#include "qprobe/observables.hpp"

#include <algorithm>
#include <cmath>

namespace qprobe {
namespace {

// Populations below this are treated as exact zeros in log/sqrt sums.
constexpr double kUnderflowFloor = 1e-300;

}  // namespace

double mean_energy(const SpinDistribution& p, MagneticField b) {
  const ZeemanLadder ladder = level_energies(b);
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumSpinStates; ++i)
    sum += p.at_index(i) * ladder.level_energy[i];
  return sum;
}

double energy_variance(const SpinDistribution& p, MagneticField b) {
  const ZeemanLadder ladder = level_energies(b);
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < kNumSpinStates; ++i) {
    const double e = ladder.level_energy[i];
    first += p.at_index(i) * e;
    second += p.at_index(i) * e * e;
  }
  return std::max(0.0, second - first * first);
}

double entropy(const SpinDistribution& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < kNumSpinStates; ++i) {
    const double v = p.at_index(i);
    if (v > kUnderflowFloor) s -= v * std::log(v);
  }
  return s;
}

ObservableSet observables(const SpinDistribution& p, MagneticField b) {
  ObservableSet out;
  out.mean_energy = mean_energy(p, b);
  out.energy_variance = energy_variance(p, b);
  out.energy_sigma = std::sqrt(out.energy_variance);
  out.entropy_over_kB = entropy(p);
  return out;
}

double bures_distance(const SpinDistribution& p, const SpinDistribution& q) {
  double overlap = 0.0;
  for (std::size_t i = 0; i < kNumSpinStates; ++i) {
    const double a = p.at_index(i);
    const double b = q.at_index(i);
    if (a > kUnderflowFloor && b > kUnderflowFloor)
      overlap += std::sqrt(a * b);
  }
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

FisherSqrt fisher_sqrt(const PopulationMap& populations, double theta0,
                       const std::vector<double>& delta_grid) {
  if (delta_grid.empty())
    throw std::invalid_argument("fisher_sqrt: empty delta grid");
  for (double d : delta_grid)
    if (!(d > 0.0))
      throw std::invalid_argument("fisher_sqrt: offsets must be > 0");

  const SpinDistribution center = populations(theta0);
  double sxy_left = 0.0, sxy_right = 0.0, sxx = 0.0;
  for (double d : delta_grid) {
    sxy_right += d * bures_distance(center, populations(theta0 + d));
    sxy_left += d * bures_distance(center, populations(theta0 - d));
    sxx += d * d;
  }
  FisherSqrt out;
  out.right = sxy_right / sxx;
  out.left = sxy_left / sxx;
  out.mean = 0.5 * (out.left + out.right);
  return out;
}

SensitivityTrace sensitivity_trace(const CrossSectionProvider& provider,
                                   const BathSpec& bath,
                                   const ProbeSpec& probe, MagneticField b,
                                   Temperature t, ScanParameter theta,
                                   const std::vector<double>& times,
                                   const std::vector<double>& delta_grid) {
  const double theta0 =
      theta == ScanParameter::kTemperature ? t.kelvin : b.tesla;

  auto rate_matrix_at = [&](double value) {
    if (theta == ScanParameter::kTemperature) {
      BathSpec bath_theta = bath;
      bath_theta.temperature = Temperature(value);
      return build_rate_matrix(provider, bath_theta, probe, b,
                               Temperature(value));
    }
    return build_rate_matrix(provider, bath, probe, MagneticField(value), t);
  };

  // One rate matrix per required theta; the per-time maps reuse them.
  std::vector<double> thetas = {theta0};
  for (double d : delta_grid) {
    thetas.push_back(theta0 + d);
    thetas.push_back(theta0 - d);
  }
  std::vector<RateMatrix> matrices;
  matrices.reserve(thetas.size());
  for (double v : thetas) matrices.push_back(rate_matrix_at(v));
  auto matrix_for = [&](double value) -> const RateMatrix& {
    for (std::size_t i = 0; i < thetas.size(); ++i)
      if (thetas[i] == value) return matrices[i];
    throw std::logic_error("sensitivity_trace: theta not precomputed");
  };

  const SpinDistribution p0 = SpinDistribution::delta(probe.initial_state);

  SensitivityTrace out;
  out.times = times;
  out.theta0 = theta0;
  out.delta_grid = delta_grid;
  out.sqrt_f.reserve(times.size());
  for (double time : times) {
    auto map = [&](double value) {
      return propagate(matrix_for(value), p0, time);
    };
    out.sqrt_f.push_back(fisher_sqrt(map, theta0, delta_grid));
  }
  auto steady_map = [&](double value) {
    return steady_state(matrix_for(value));
  };
  out.steady_sqrt_f = fisher_sqrt(steady_map, theta0, delta_grid);
  return out;
}

EntropyVsCollisions entropy_vs_collisions(const TimeTrace& trace) {
  EntropyVsCollisions out;
  out.n_spin.reserve(trace.times.size());
  out.entropy.reserve(trace.times.size());
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out.n_spin.push_back(trace.n_endo[k] + trace.n_exo[k]);
    out.entropy.push_back(entropy(trace.distributions[k]));
  }
  out.argmax = static_cast<std::size_t>(
      std::max_element(out.entropy.begin(), out.entropy.end()) -
      out.entropy.begin());
  return out;
}

}  // namespace qprobe
