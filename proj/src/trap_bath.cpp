#include "qprobe/trap_bath.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace qprobe {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Per-axis factor of integral g_a(x) g_b(x) dx for unit Gaussians of
// widths a, b: 1 / sqrt(2 pi (a^2 + b^2)).
double pair_overlap_1d(double a, double b) {
  return 1.0 / std::sqrt(kTwoPi * (a * a + b * b));
}

// Per-axis factor of integral g_a(x)^2 g_b(x) dx.
double squared_overlap_1d(double a, double b) {
  return 1.0 / (2.0 * std::sqrt(kPi) * a) /
         std::sqrt(kTwoPi * (0.5 * a * a + b * b));
}

}  // namespace

double gaussian_width(Temperature t, double mass, double omega) {
  if (!(t.kelvin > 0.0) || !(mass > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("gaussian_width: requires T, m, omega > 0");
  return std::sqrt(constants::k_boltzmann * t.kelvin / (mass * omega * omega));
}

OverlapResult density_overlap(const BathSpec& bath, const ProbeSpec& probe) {
  const std::array<double, 3> omegas = {bath.omega_r, bath.omega_r,
                                        bath.omega_z};
  OverlapResult out;
  out.n_mean = bath.n_rb;
  out.n2_mean = bath.n_rb * bath.n_rb;
  for (double omega : omegas) {
    const double w_rb = gaussian_width(bath.temperature, bath.mass, omega);
    const double w_cs = gaussian_width(bath.temperature, probe.mass,
                                       omega * probe.trap_scale);
    out.n_mean *= pair_overlap_1d(w_rb, w_cs);
    out.n2_mean *= squared_overlap_1d(w_rb, w_cs);
  }
  return out;
}

double mean_relative_speed(Temperature t, double mass1, double mass2) {
  if (!(mass1 > 0.0) || !(mass2 > 0.0))
    throw std::invalid_argument("mean_relative_speed: masses must be > 0");
  const double mu = mass1 * mass2 / (mass1 + mass2);
  return std::sqrt(8.0 * constants::k_boltzmann * t.kelvin / (kPi * mu));
}

double thermalization_rate(double gamma_el, double n_rb, double n_cs,
                           double mass_rb, double mass_cs) {
  if (!(gamma_el >= 0.0) || !(n_rb > 0.0) || !(n_cs >= 0.0))
    throw std::invalid_argument("thermalization_rate: invalid inputs");
  const double sum = mass_rb + mass_cs;
  const double xi = 4.0 * mass_rb * mass_cs / (sum * sum);
  return gamma_el / 3.0 * xi * (n_rb + n_cs) / n_rb;
}

ThreeBodyLoss three_body_rate(double l3, double n2_mean) {
  if (!(l3 >= 0.0))
    throw std::invalid_argument("three_body_rate: L3 must be >= 0");
  ThreeBodyLoss out;
  out.rate = l3 * n2_mean;
  out.lifetime = out.rate > 0.0 ? 1.0 / out.rate
                                : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace qprobe
