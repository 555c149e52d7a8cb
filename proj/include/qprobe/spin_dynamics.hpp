#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "qprobe/collision_energetics.hpp"
#include "qprobe/cross_sections.hpp"
#include "qprobe/spin.hpp"
#include "qprobe/trap_bath.hpp"

namespace qprobe {

using Generator = Eigen::Matrix<double, kNumSpinStates, kNumSpinStates>;
using Populations = Eigen::Matrix<double, kNumSpinStates, 1>;

// Continuous-time Markov generator of the 7-state spin chain. Only
// nearest-neighbor transitions are nonzero: endoergic m_F -> m_F + 1
// (index i -> i - 1) and exoergic m_F -> m_F - 1 (index i -> i + 1).
class RateMatrix {
 public:
  // Rates indexed by the initial state's storage index (m_F = +3 at 0).
  // endo_from[0] and exo_from[6] must be zero (no transition out of range).
  RateMatrix(const std::array<double, kNumSpinStates>& endo_from,
             const std::array<double, kNumSpinStates>& exo_from);

  double endo_rate(SpinState from) const { return endo_from_[from.index()]; }
  double exo_rate(SpinState from) const { return exo_from_[from.index()]; }
  const std::array<double, kNumSpinStates>& endo_rates() const {
    return endo_from_;
  }
  const std::array<double, kNumSpinStates>& exo_rates() const {
    return exo_from_;
  }
  const Generator& generator() const { return generator_; }
  double max_rate() const { return max_rate_; }

  // Mean spin-collision rates <Gamma_endo>, <Gamma_exo> for populations p.
  double mean_endo_rate(const Populations& p) const;
  double mean_exo_rate(const Populations& p) const;

 private:
  std::array<double, kNumSpinStates> endo_from_;
  std::array<double, kNumSpinStates> exo_from_;
  Generator generator_;
  double max_rate_ = 0.0;
};

// Gamma_i = <n> sigma_i(B,T) vbar for all twelve channels.
RateMatrix build_rate_matrix(const CrossSectionProvider& provider,
                             const BathSpec& bath, const ProbeSpec& probe,
                             MagneticField b, Temperature t);

// p(t) = exp(Q t) p0 by scaling-and-squaring matrix exponential.
SpinDistribution propagate(const RateMatrix& q, const SpinDistribution& p0,
                           double t);

struct TimeTrace {
  std::vector<double> times;  // s, sorted, starting at 0
  std::vector<SpinDistribution> distributions;
  std::vector<double> n_endo;  // cumulative mean endoergic collisions
  std::vector<double> n_exo;   // cumulative mean exoergic collisions
};

// Distributions via matrix exponential; collision counts by composite
// Simpson integration of the mean rates on a refined grid.
TimeTrace evolve_trace(const RateMatrix& q, const SpinDistribution& p0,
                       const std::vector<double>& time_grid);

// Stationary distribution from the one-dimensional null space of Q.
// Throws when the null space is not one-dimensional (zero matrix,
// disconnected chain).
SpinDistribution steady_state(const RateMatrix& q);

// Steady state with all rates replaced by thermally averaged cross
// sections (<n> = vbar = 1); identical to the full-rate steady state.
SpinDistribution steady_state_from_sigmas(const CrossSectionProvider& provider,
                                          MagneticField b, Temperature t);

struct SsaResult {
  std::uint64_t n_trajectories = 0;
  std::uint64_t rng_seed = 0;
  std::vector<double> checkpoints;  // s
  // Empirical state occupancy per checkpoint, indexed like SpinDistribution.
  std::vector<std::array<double, kNumSpinStates>> occupancy;
  std::vector<double> mean_n_endo;
  std::vector<double> mean_n_exo;
  std::vector<double> stderr_n_endo;
  std::vector<double> stderr_n_exo;
};

// Exact Gillespie sampling of the jump process. Per-trajectory RNG streams
// are derived from (seed, trajectory index), so results are independent of
// scheduling and bit-identical across runs.
SsaResult ssa_simulate(const RateMatrix& q, const SpinDistribution& p0,
                       const std::vector<double>& checkpoints,
                       std::uint64_t n_trajectories, std::uint64_t seed);

}  // namespace qprobe
