#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprobe/config.hpp"
#include "qprobe/estimation.hpp"

namespace qprobe {

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Round-trip decimal formatting (17 significant digits).
std::string format_full(double value);

// Data file schema: `mF,p_exp,sigma_exp`, exactly one row per m_F.
MeasuredPopulations load_measured_populations(const std::string& path);

// Drivers behind the CLI subcommands. Each writes its outputs under
// out_dir and returns the summary JSON as a string.
std::string run_simulate(const RunConfig& config, const std::string& out_dir);

std::string run_steady_state(const RunConfig& config,
                             const std::string& out_dir);

enum class EstimateMode { kTemperature, kField };

// theta range in boundary units: nK for temperature, mG for field.
std::string run_estimate(const RunConfig& config, const std::string& data_file,
                         EstimateMode mode, double theta_lo, double theta_hi,
                         const std::string& out_dir);

std::string run_sensitivity(const RunConfig& config, EstimateMode mode,
                            double delta_rel, const std::string& out_dir);

std::string run_endo_fraction(const RunConfig& config,
                              const std::string& out_dir);

std::string run_ssa(const RunConfig& config, std::uint64_t n_trajectories,
                    const std::string& out_dir);

}  // namespace qprobe
