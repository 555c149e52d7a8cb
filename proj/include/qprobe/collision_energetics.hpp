#pragma once

#include "qprobe/cross_sections.hpp"
#include "qprobe/units.hpp"

namespace qprobe {

// Maxwell-Boltzmann distribution of collision energies,
// p(E_c) = (1/(pi k_B T))^{3/2} 2 pi sqrt(E_c) exp(-E_c/(k_B T)).
// Units 1/J. T=0 is rejected; callers special-case the degenerate limit.
double mb_pdf(double collision_energy, Temperature t);

// Fraction of collisions with E_c above the endoergic threshold dE/2:
// p(B,T) = erfc(sqrt(a)) + 2 sqrt(a/pi) exp(-a), a = mu_B B / (4 k_B T).
// Limits: p = 1 at B = 0, p = 0 at T = 0 with B > 0.
double endoergic_fraction(MagneticField b, Temperature t);

// Same quantity by adaptive quadrature of mb_pdf from dE/2 upward; the
// independent oracle for the closed form.
double endoergic_fraction_numeric(MagneticField b, Temperature t);

// Thermal average sigma(B,T) = integral p(E_c) sigma(B,E_c) dE_c. For
// endoergic channels the integrand vanishes below threshold. Finite
// provider domains truncate the quadrature range; tables must span the
// thermal range [0, ~45 k_B T] for full accuracy.
double thermal_average_sigma(const CrossSectionProvider& provider,
                             CollisionChannel channel, MagneticField b,
                             Temperature t);

}  // namespace qprobe
