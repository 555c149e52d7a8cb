#pragma once

#include "qprobe/spin.hpp"
#include "qprobe/units.hpp"

namespace qprobe {

// Harmonic-trap bath of N_Rb atoms, thermalized at T. Cylindrical trap:
// two radial axes at omega_r, one axial at omega_z.
struct BathSpec {
  double n_rb = 0.0;
  Temperature temperature;
  double omega_r = 0.0;  // rad/s
  double omega_z = 0.0;  // rad/s
  double mass = constants::mass_rb87;  // kg

  BathSpec() = default;
  BathSpec(double n, Temperature t, double wr, double wz,
           double m = constants::mass_rb87)
      : n_rb(n), temperature(t), omega_r(wr), omega_z(wz), mass(m) {
    if (!(n_rb > 0.0)) throw std::invalid_argument("BathSpec: N_Rb must be > 0");
    if (!(omega_r > 0.0) || !(omega_z > 0.0))
      throw std::invalid_argument("BathSpec: trap frequencies must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("BathSpec: mass must be > 0");
  }
};

// Probe atoms share the bath trap up to a frequency scale factor.
struct ProbeSpec {
  double n_cs = 1.0;
  double mass = constants::mass_cs133;  // kg
  SpinState initial_state{2};
  double trap_scale = 1.0;

  ProbeSpec() = default;
  ProbeSpec(double n, SpinState initial, double scale = 1.0,
            double m = constants::mass_cs133)
      : n_cs(n), mass(m), initial_state(initial), trap_scale(scale) {
    if (!(n_cs >= 1.0)) throw std::invalid_argument("ProbeSpec: N_Cs must be >= 1");
    if (!(trap_scale > 0.0))
      throw std::invalid_argument("ProbeSpec: trap_scale must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("ProbeSpec: mass must be > 0");
  }
};

struct OverlapResult {
  double n_mean = 0.0;   // <n> = integral n_Rb n_Cs d3r, m^-3 (probe unit-normalized)
  double n2_mean = 0.0;  // <n^2> = integral n_Rb^2 n_Cs d3r, m^-6
};

// 1/e^(1/2) Gaussian width of a thermal cloud along one trap axis.
double gaussian_width(Temperature t, double mass, double omega);

// Closed-form Gaussian overlap integrals; the probe density is normalized
// to one atom so <n> is the bath density seen by a single probe.
OverlapResult density_overlap(const BathSpec& bath, const ProbeSpec& probe);

// Mean relative thermal speed sqrt(8 k_B T / (pi mu)).
double mean_relative_speed(Temperature t, double mass1, double mass2);

// Gamma_ther = (Gamma_el / 3) xi (N_Rb + N_Cs) / N_Rb with the momentum
// transfer factor xi = 4 m_Rb m_Cs / (m_Rb + m_Cs)^2.
double thermalization_rate(double gamma_el, double n_rb, double n_cs,
                           double mass_rb = constants::mass_rb87,
                           double mass_cs = constants::mass_cs133);

struct ThreeBodyLoss {
  double rate = 0.0;      // 1/s
  double lifetime = 0.0;  // s, +inf when rate is 0
};

// Gamma_3body = L3 <n^2>; L3 in m^6/s.
ThreeBodyLoss three_body_rate(double l3, double n2_mean);

}  // namespace qprobe
