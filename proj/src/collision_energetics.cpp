#include "qprobe/collision_energetics.hpp"

#include <algorithm>
#include <cmath>

#include "qprobe/quadrature.hpp"

namespace qprobe {
namespace {

constexpr double kPi = 3.14159265358979323846;
// Integration window in units of k_B T above the threshold. The relative
// tail mass beyond the window is below exp(-45) ~ 3e-20.
constexpr double kThermalWindow = 45.0;

// Dimensionless MB density in u = E_c / (k_B T): (2/sqrt(pi)) sqrt(u) e^{-u}.
double mb_pdf_reduced(double u) {
  return 2.0 / std::sqrt(kPi) * std::sqrt(u) * std::exp(-u);
}

}  // namespace

double mb_pdf(double collision_energy, Temperature t) {
  if (!(t.kelvin > 0.0))
    throw std::invalid_argument("mb_pdf: degenerate distribution at T = 0");
  if (!(collision_energy >= 0.0))
    throw std::invalid_argument("mb_pdf: E_c must be >= 0");
  const double kt = constants::k_boltzmann * t.kelvin;
  return mb_pdf_reduced(collision_energy / kt) / kt;
}

double endoergic_fraction(MagneticField b, Temperature t) {
  if (b.tesla == 0.0) return 1.0;  // no threshold
  if (t.kelvin == 0.0) return 0.0;
  const double a = constants::bohr_magneton * b.tesla /
                   (4.0 * constants::k_boltzmann * t.kelvin);
  const double sqrt_a = std::sqrt(a);
  return std::erfc(sqrt_a) + 2.0 * std::sqrt(a / kPi) * std::exp(-a);
}

double endoergic_fraction_numeric(MagneticField b, Temperature t) {
  if (!(t.kelvin > 0.0))
    throw std::invalid_argument(
        "endoergic_fraction_numeric: requires T > 0");
  const double a = constants::bohr_magneton * b.tesla /
                   (4.0 * constants::k_boltzmann * t.kelvin);
  return integrate_adaptive(mb_pdf_reduced, a, a + kThermalWindow, 1e-11);
}

double thermal_average_sigma(const CrossSectionProvider& provider,
                             CollisionChannel channel, MagneticField b,
                             Temperature t) {
  if (!(t.kelvin > 0.0))
    throw std::invalid_argument("thermal_average_sigma: requires T > 0");
  if (!provider.has_channel(channel))
    throw std::out_of_range("thermal_average_sigma: channel not provided");
  const double kt = constants::k_boltzmann * t.kelvin;
  const auto [dom_lo, dom_hi] = provider.energy_domain(channel, b);

  const double threshold_u = channel_threshold_energy(channel, b) / kt;
  double lo = std::max(threshold_u, dom_lo / kt);
  double hi = std::min(threshold_u + kThermalWindow, dom_hi / kt);
  if (!(hi > lo)) return 0.0;

  auto integrand = [&](double u) {
    return mb_pdf_reduced(u) * provider.sigma(channel, b, u * kt);
  };
  return integrate_adaptive(integrand, lo, hi, 1e-10);
}

}  // namespace qprobe
