#pragma once

#include <cmath>
#include <stdexcept>

namespace qprobe {

// CODATA 2018 values. k_B is exact in the 2019 SI.
namespace constants {
inline constexpr double k_boltzmann = 1.380649e-23;      // J/K
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double mass_rb87 = 86.909180531 * atomic_mass_unit;   // kg
inline constexpr double mass_cs133 = 132.905451961 * atomic_mass_unit;  // kg
inline constexpr double lande_gf_probe = 0.25;  // |g_F| of the Cs F=3 manifold
}  // namespace constants

// All internal computation is SI. The conversions below are the only places
// where nK, mG and cm^2 appear.
inline double kelvin_from_nK(double t_nK) { return t_nK * 1e-9; }
inline double nK_from_kelvin(double t_K) { return t_K * 1e9; }
inline double tesla_from_mG(double b_mG) { return b_mG * 1e-7; }
inline double mG_from_tesla(double b_T) { return b_T * 1e7; }
inline double m2_from_cm2(double s_cm2) { return s_cm2 * 1e-4; }
inline double cm2_from_m2(double s_m2) { return s_m2 * 1e4; }

// Strong types for the two scan parameters. Values are SI (T, K).
struct MagneticField {
  double tesla = 0.0;

  MagneticField() = default;
  explicit MagneticField(double value_tesla) : tesla(value_tesla) {
    if (!(tesla >= 0.0))
      throw std::invalid_argument("MagneticField: value must be >= 0");
  }
  static MagneticField from_mG(double b_mG) {
    return MagneticField(tesla_from_mG(b_mG));
  }
  double mG() const { return mG_from_tesla(tesla); }
};

struct Temperature {
  double kelvin = 0.0;

  Temperature() = default;
  explicit Temperature(double value_kelvin) : kelvin(value_kelvin) {
    if (!(kelvin >= 0.0))
      throw std::invalid_argument("Temperature: value must be >= 0");
  }
  static Temperature from_nK(double t_nK) {
    return Temperature(kelvin_from_nK(t_nK));
  }
  double nK() const { return nK_from_kelvin(kelvin); }
};

}  // namespace qprobe
