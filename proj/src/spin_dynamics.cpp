#include "qprobe/spin_dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace qprobe {
namespace {

Populations to_vector(const SpinDistribution& p) {
  Populations v;
  for (int i = 0; i < kNumSpinStates; ++i) v(i) = p.at_index(i);
  return v;
}

SpinDistribution to_distribution(Populations v) {
  std::array<double, kNumSpinStates> p{};
  for (int i = 0; i < kNumSpinStates; ++i) {
    if (v(i) < -1e-12)
      throw std::runtime_error("propagate: negative population beyond tolerance");
    p[i] = std::max(v(i), 0.0);
  }
  return SpinDistribution(p);
}

// splitmix64, used to derive independent per-trajectory RNG streams.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed, std::uint64_t index) {
    state_ = seed;
    (void)splitmix64(state_);
    state_ ^= 0x9E3779B97F4A7C15ULL * (index + 1);
    (void)splitmix64(state_);
  }
  double uniform() {  // in (0, 1]
    const std::uint64_t bits = splitmix64(state_) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  std::uint64_t state_;
};

}  // namespace

RateMatrix::RateMatrix(const std::array<double, kNumSpinStates>& endo_from,
                       const std::array<double, kNumSpinStates>& exo_from)
    : endo_from_(endo_from), exo_from_(exo_from) {
  if (endo_from_[0] != 0.0)
    throw std::invalid_argument("RateMatrix: no endoergic channel from m_F=+3");
  if (exo_from_[kNumSpinStates - 1] != 0.0)
    throw std::invalid_argument("RateMatrix: no exoergic channel from m_F=-3");
  for (int i = 0; i < kNumSpinStates; ++i)
    if (!(endo_from_[i] >= 0.0) || !(exo_from_[i] >= 0.0))
      throw std::invalid_argument("RateMatrix: rates must be >= 0");

  generator_.setZero();
  for (int i = 0; i < kNumSpinStates; ++i) {
    if (i > 0) generator_(i - 1, i) += endo_from_[i];  // m_F -> m_F + 1
    if (i < kNumSpinStates - 1)
      generator_(i + 1, i) += exo_from_[i];  // m_F -> m_F - 1
    generator_(i, i) -= endo_from_[i] + exo_from_[i];
    max_rate_ = std::max({max_rate_, endo_from_[i], exo_from_[i]});
  }
}

double RateMatrix::mean_endo_rate(const Populations& p) const {
  double sum = 0.0;
  for (int i = 0; i < kNumSpinStates; ++i) sum += endo_from_[i] * p(i);
  return sum;
}

double RateMatrix::mean_exo_rate(const Populations& p) const {
  double sum = 0.0;
  for (int i = 0; i < kNumSpinStates; ++i) sum += exo_from_[i] * p(i);
  return sum;
}

RateMatrix build_rate_matrix(const CrossSectionProvider& provider,
                             const BathSpec& bath, const ProbeSpec& probe,
                             MagneticField b, Temperature t) {
  const OverlapResult overlap = density_overlap(bath, probe);
  const double vbar = mean_relative_speed(bath.temperature, bath.mass,
                                          probe.mass);
  std::array<double, kNumSpinStates> endo_from{};
  std::array<double, kNumSpinStates> exo_from{};
  for (const CollisionChannel& c : all_channels()) {
    if (!provider.has_channel(c))
      throw std::out_of_range("build_rate_matrix: provider missing channel");
    const double rate =
        overlap.n_mean * thermal_average_sigma(provider, c, b, t) * vbar;
    if (c.direction == SpinExchangeDirection::kEndoergic)
      endo_from[c.initial.index()] = rate;
    else
      exo_from[c.initial.index()] = rate;
  }
  return RateMatrix(endo_from, exo_from);
}

SpinDistribution propagate(const RateMatrix& q, const SpinDistribution& p0,
                           double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagate: t must be >= 0");
  if (t == 0.0) return p0;
  const Generator transition = (q.generator() * t).exp();
  return to_distribution(transition * to_vector(p0));
}

TimeTrace evolve_trace(const RateMatrix& q, const SpinDistribution& p0,
                       const std::vector<double>& time_grid) {
  if (time_grid.empty() || time_grid.front() != 0.0)
    throw std::invalid_argument("evolve_trace: grid must start at 0");
  for (std::size_t k = 1; k < time_grid.size(); ++k)
    if (!(time_grid[k] > time_grid[k - 1]))
      throw std::invalid_argument("evolve_trace: grid must be sorted");

  TimeTrace trace;
  trace.times = time_grid;
  trace.distributions.reserve(time_grid.size());
  trace.n_endo.reserve(time_grid.size());
  trace.n_exo.reserve(time_grid.size());

  trace.distributions.push_back(p0);
  trace.n_endo.push_back(0.0);
  trace.n_exo.push_back(0.0);

  const double max_rate = q.max_rate();
  const double max_step = max_rate > 0.0 ? 0.05 / max_rate
                                         : std::numeric_limits<double>::infinity();
  Populations p = to_vector(p0);
  double n_endo = 0.0;
  double n_exo = 0.0;

  for (std::size_t k = 1; k < time_grid.size(); ++k) {
    const double dt = time_grid[k] - time_grid[k - 1];
    // Even number of substeps so each pair forms one Simpson panel.
    std::size_t n_sub = 2;
    if (std::isfinite(max_step))
      n_sub = std::max<std::size_t>(
          2, 2 * static_cast<std::size_t>(std::ceil(dt / max_step / 2.0)));
    const double h = dt / static_cast<double>(n_sub);
    const Generator step = (q.generator() * h).exp();

    double ge_prev = q.mean_endo_rate(p);
    double gx_prev = q.mean_exo_rate(p);
    for (std::size_t s = 0; s + 2 <= n_sub; s += 2) {
      p = step * p;
      const double ge_mid = q.mean_endo_rate(p);
      const double gx_mid = q.mean_exo_rate(p);
      p = step * p;
      const double ge_next = q.mean_endo_rate(p);
      const double gx_next = q.mean_exo_rate(p);
      n_endo += h / 3.0 * (ge_prev + 4.0 * ge_mid + ge_next);
      n_exo += h / 3.0 * (gx_prev + 4.0 * gx_mid + gx_next);
      ge_prev = ge_next;
      gx_prev = gx_next;
    }
    // Re-evaluate at the grid node by a single exact jump from t=0 to kill
    // accumulated repeated-multiplication drift.
    p = (q.generator() * time_grid[k]).exp() * to_vector(p0);
    trace.distributions.push_back(to_distribution(p));
    trace.n_endo.push_back(n_endo);
    trace.n_exo.push_back(n_exo);
  }
  return trace;
}

SpinDistribution steady_state(const RateMatrix& q) {
  const double scale = q.max_rate();
  if (scale == 0.0)
    throw std::runtime_error("steady_state: non-unique steady state");
  const Generator scaled = q.generator() / scale;
  Eigen::FullPivLU<Generator> lu(scaled);
  lu.setThreshold(1e-10);
  const auto kernel = lu.kernel();
  if (kernel.cols() != 1)
    throw std::runtime_error("steady_state: non-unique steady state");

  Eigen::VectorXd v = kernel.col(0);
  const double sum = v.sum();
  if (std::abs(sum) < 1e-12 * v.cwiseAbs().maxCoeff())
    throw std::runtime_error("steady_state: degenerate null vector");
  v /= sum;

  std::array<double, kNumSpinStates> p{};
  double renorm = 0.0;
  for (int i = 0; i < kNumSpinStates; ++i) {
    if (v(i) < -1e-10)
      throw std::runtime_error("steady_state: negative stationary population");
    p[i] = std::max(v(i), 0.0);
    renorm += p[i];
  }
  for (double& x : p) x /= renorm;
  return SpinDistribution(p);
}

SpinDistribution steady_state_from_sigmas(const CrossSectionProvider& provider,
                                          MagneticField b, Temperature t) {
  std::array<double, kNumSpinStates> endo_from{};
  std::array<double, kNumSpinStates> exo_from{};
  for (const CollisionChannel& c : all_channels()) {
    if (!provider.has_channel(c))
      throw std::out_of_range(
          "steady_state_from_sigmas: provider missing channel");
    const double sigma = thermal_average_sigma(provider, c, b, t);
    if (c.direction == SpinExchangeDirection::kEndoergic)
      endo_from[c.initial.index()] = sigma;
    else
      exo_from[c.initial.index()] = sigma;
  }
  return steady_state(RateMatrix(endo_from, exo_from));
}

SsaResult ssa_simulate(const RateMatrix& q, const SpinDistribution& p0,
                       const std::vector<double>& checkpoints,
                       std::uint64_t n_trajectories, std::uint64_t seed) {
  if (n_trajectories < 1)
    throw std::invalid_argument("ssa_simulate: n_trajectories must be >= 1");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (!(checkpoints[k] >= 0.0))
      throw std::invalid_argument("ssa_simulate: checkpoints must be >= 0");
    if (k > 0 && !(checkpoints[k] >= checkpoints[k - 1]))
      throw std::invalid_argument("ssa_simulate: checkpoints must be sorted");
  }

  const std::size_t n_ck = checkpoints.size();
  SsaResult result;
  result.n_trajectories = n_trajectories;
  result.rng_seed = seed;
  result.checkpoints = checkpoints;
  result.occupancy.assign(n_ck, {});
  result.mean_n_endo.assign(n_ck, 0.0);
  result.mean_n_exo.assign(n_ck, 0.0);
  result.stderr_n_endo.assign(n_ck, 0.0);
  result.stderr_n_exo.assign(n_ck, 0.0);

  std::vector<double> sumsq_endo(n_ck, 0.0), sumsq_exo(n_ck, 0.0);
  const auto& endo_from = q.endo_rates();
  const auto& exo_from = q.exo_rates();

  // Fixed index-order aggregation keeps results scheduling-independent.
  for (std::uint64_t traj = 0; traj < n_trajectories; ++traj) {
    TrajectoryRng rng(seed, traj);

    // Sample the initial state from p0.
    int state = kNumSpinStates - 1;
    {
      double u = rng.uniform();
      double acc = 0.0;
      for (int i = 0; i < kNumSpinStates; ++i) {
        acc += p0.at_index(i);
        if (u <= acc) {
          state = i;
          break;
        }
      }
    }

    double now = 0.0;
    std::uint64_t endo_count = 0, exo_count = 0;
    std::size_t ck = 0;
    while (ck < n_ck) {
      const double total = endo_from[state] + exo_from[state];
      double t_jump = std::numeric_limits<double>::infinity();
      if (total > 0.0) t_jump = now + rng.exponential(total);
      // Record every checkpoint passed before the next jump.
      while (ck < n_ck && checkpoints[ck] < t_jump) {
        result.occupancy[ck][state] += 1.0;
        result.mean_n_endo[ck] += static_cast<double>(endo_count);
        result.mean_n_exo[ck] += static_cast<double>(exo_count);
        sumsq_endo[ck] += static_cast<double>(endo_count) * endo_count;
        sumsq_exo[ck] += static_cast<double>(exo_count) * exo_count;
        ++ck;
      }
      if (ck >= n_ck) break;
      now = t_jump;
      if (rng.uniform() * total <= endo_from[state]) {
        --state;  // m_F -> m_F + 1
        ++endo_count;
      } else {
        ++state;  // m_F -> m_F - 1
        ++exo_count;
      }
    }
  }

  const double n = static_cast<double>(n_trajectories);
  for (std::size_t k = 0; k < n_ck; ++k) {
    for (double& o : result.occupancy[k]) o /= n;
    result.mean_n_endo[k] /= n;
    result.mean_n_exo[k] /= n;
    const double var_endo =
        std::max(0.0, sumsq_endo[k] / n -
                          result.mean_n_endo[k] * result.mean_n_endo[k]);
    const double var_exo = std::max(
        0.0, sumsq_exo[k] / n - result.mean_n_exo[k] * result.mean_n_exo[k]);
    result.stderr_n_endo[k] = std::sqrt(var_endo / n);
    result.stderr_n_exo[k] = std::sqrt(var_exo / n);
  }
  return result;
}

}  // namespace qprobe
