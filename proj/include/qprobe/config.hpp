#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "qprobe/cross_sections.hpp"
#include "qprobe/trap_bath.hpp"
#include "qprobe/units.hpp"

namespace qprobe {

// Canonical run configuration, parsed from JSON. Boundary units (nK, mG,
// cm^2, Hz) live here; everything downstream is SI.
struct RunConfig {
  struct Bath {
    double n_rb = 7000.0;
    double temperature_nK = 400.0;
    double omega_r_Hz = 330.0;  // linear frequency, converted to rad/s
    double omega_z_Hz = 50.0;
  } bath;

  struct Probe {
    double n_cs = 1.0;
    int initial_mF = 2;
    double trap_scale = 1.0;
  } probe;

  double field_mG = 10.0;

  struct CrossSections {
    std::string mode = "synthetic";  // "synthetic" or "table"
    std::string path;                // table mode
    double sigma0_exo_cm2 = 3e-12;
    double sigma0_endo_cm2 = 3e-12;
    double threshold_exponent = 0.5;
  } cross_sections;

  struct Time {
    double t_max_s = 3.0;
    std::size_t n_points = 61;
  } time;

  std::uint64_t seed = 12345;
  // Rb-Rb-Cs three-body loss coefficient, reported as a diagnostic.
  double l3_cm6_hz = 28e-26;

  BathSpec bath_spec() const;
  ProbeSpec probe_spec() const;
  MagneticField field() const;
  Temperature temperature() const;
  std::unique_ptr<CrossSectionProvider> make_provider() const;
};

// Throws ParseError naming the offending field on invalid input.
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& json_text);

}  // namespace qprobe
