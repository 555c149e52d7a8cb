#pragma once

#include <functional>
#include <vector>

#include "qprobe/spin.hpp"
#include "qprobe/spin_dynamics.hpp"
#include "qprobe/units.hpp"

namespace qprobe {

struct ObservableSet {
  double mean_energy = 0.0;     // J
  double energy_variance = 0.0; // J^2
  double energy_sigma = 0.0;    // J
  double entropy_over_kB = 0.0; // dimensionless, in [0, ln 7]
};

double mean_energy(const SpinDistribution& p, MagneticField b);
double energy_variance(const SpinDistribution& p, MagneticField b);
// Shannon entropy in units of k_B (natural log, 0 log 0 := 0).
double entropy(const SpinDistribution& p);
ObservableSet observables(const SpinDistribution& p, MagneticField b);

// sqrt(2 - 2 sum sqrt(p q)); the Hellinger distance scaled to the Bures
// convention for diagonal density matrices.
double bures_distance(const SpinDistribution& p, const SpinDistribution& q);

using PopulationMap = std::function<SpinDistribution(double)>;

struct FisherSqrt {
  double mean = 0.0;   // headline sensitivity sqrt(F_theta)
  double left = 0.0;   // one-sided slope for delta_theta < 0
  double right = 0.0;  // one-sided slope for delta_theta > 0
};

// Statistical speed of the Bures distance under a parameter change:
// origin-constrained least-squares slope of d_Bures vs |delta| fitted
// separately on each side of theta0, mean of the two reported.
FisherSqrt fisher_sqrt(const PopulationMap& populations, double theta0,
                       const std::vector<double>& delta_grid);

enum class ScanParameter { kTemperature, kField };

struct SensitivityTrace {
  std::vector<double> times;       // s
  std::vector<FisherSqrt> sqrt_f;  // per time
  FisherSqrt steady_sqrt_f;        // same procedure on steady states
  double theta0 = 0.0;
  std::vector<double> delta_grid;
};

// Time-resolved sqrt(F_theta) of the evolving spin distribution, plus the
// steady-state baseline. Populations at perturbed theta come from fresh
// rate matrices at theta0 +- delta.
SensitivityTrace sensitivity_trace(const CrossSectionProvider& provider,
                                   const BathSpec& bath,
                                   const ProbeSpec& probe, MagneticField b,
                                   Temperature t, ScanParameter theta,
                                   const std::vector<double>& times,
                                   const std::vector<double>& delta_grid);

struct EntropyVsCollisions {
  std::vector<double> n_spin;   // N_endo + N_exo per trace point
  std::vector<double> entropy;  // S/k_B per trace point
  std::size_t argmax = 0;
};

EntropyVsCollisions entropy_vs_collisions(const TimeTrace& trace);

}  // namespace qprobe
