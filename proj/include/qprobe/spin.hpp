#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

#include "qprobe/units.hpp"

namespace qprobe {

inline constexpr int kNumSpinStates = 7;

// One of the seven Zeeman sublevels m_F in {-3..+3} of the probe's F=3
// manifold. Populations are stored indexed from m_F=+3 down to m_F=-3.
struct SpinState {
  int m_F = 3;

  SpinState() = default;
  explicit SpinState(int m) : m_F(m) {
    if (m_F < -3 || m_F > 3)
      throw std::invalid_argument("SpinState: m_F out of range [-3, 3]");
  }
  // Storage index: 0 <-> m_F=+3, 6 <-> m_F=-3.
  std::size_t index() const { return static_cast<std::size_t>(3 - m_F); }
  static SpinState from_index(std::size_t i) {
    return SpinState(3 - static_cast<int>(i));
  }
};

// Seven nonnegative populations summing to 1, indexed from m_F=+3 to -3.
class SpinDistribution {
 public:
  static constexpr double kRenormalizeTolerance = 1e-9;

  SpinDistribution() : p_{} { p_[0] = 1.0; }

  explicit SpinDistribution(const std::array<double, kNumSpinStates>& p)
      : p_(p) {
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0))
        throw std::invalid_argument(
            "SpinDistribution: negative or non-finite population");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRenormalizeTolerance)
      throw std::invalid_argument(
          "SpinDistribution: populations do not sum to 1");
    for (double& v : p_) v /= sum;
  }

  static SpinDistribution delta(SpinState s) {
    std::array<double, kNumSpinStates> p{};
    p[s.index()] = 1.0;
    return SpinDistribution(p);
  }

  double operator[](SpinState s) const { return p_[s.index()]; }
  double at_index(std::size_t i) const { return p_.at(i); }
  const std::array<double, kNumSpinStates>& values() const { return p_; }

 private:
  std::array<double, kNumSpinStates> p_;
};

// Zeeman energy bookkeeping: E_{m_F} = (3 - m_F) * dE/2 with E_{+3} = 0,
// dE/2 = g_F mu_B B.
inline double zeeman_half_splitting(MagneticField b) {
  return constants::lande_gf_probe * constants::bohr_magneton * b.tesla;
}

struct ZeemanLadder {
  double half_step = 0.0;  // dE/2 (J)
  std::array<double, kNumSpinStates> level_energy{};  // indexed like SpinDistribution

  double energy(SpinState s) const { return level_energy[s.index()]; }
};

inline ZeemanLadder level_energies(MagneticField b) {
  ZeemanLadder ladder;
  ladder.half_step = zeeman_half_splitting(b);
  for (std::size_t i = 0; i < kNumSpinStates; ++i)
    ladder.level_energy[i] = static_cast<double>(i) * ladder.half_step;
  return ladder;
}

}  // namespace qprobe
