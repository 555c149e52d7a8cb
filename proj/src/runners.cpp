#include "qprobe/runners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qprobe/collision_energetics.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/observables.hpp"
#include "qprobe/spin_dynamics.hpp"

namespace qprobe {
namespace {

using nlohmann::json;

std::vector<double> time_grid(const RunConfig& config) {
  std::vector<double> times(config.time.n_points);
  for (std::size_t k = 0; k < times.size(); ++k)
    times[k] = config.time.t_max_s * static_cast<double>(k) /
               static_cast<double>(times.size() - 1);
  return times;
}

json populations_json(const SpinDistribution& p) {
  json out = json::object();
  for (int m = 3; m >= -3; --m)
    out["m" + std::to_string(m)] = p[SpinState(m)];
  return out;
}

std::string column_header() {
  return "t_s,p_m+3,p_m+2,p_m+1,p_m0,p_m-1,p_m-2,p_m-3,entropy_kB,n_endo,"
         "n_exo,sigmaE_over_kB_nK";
}

void append_row(std::ostringstream& csv,
                const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) csv << ',';
    csv << format_full(values[i]);
  }
  csv << '\n';
}

std::vector<double> delta_grid_for(double theta0, double delta_rel) {
  const double d = delta_rel * theta0;
  return {d / 4.0, d / 2.0, d};
}

}  // namespace

std::string format_full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

MeasuredPopulations load_measured_populations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("data: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("data: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "mF,p_exp,sigma_exp")
    throw ParseError("data: bad header, expected 'mF,p_exp,sigma_exp'");

  std::array<double, kNumSpinStates> p{};
  std::array<double, kNumSpinStates> sigma{};
  std::array<bool, kNumSpinStates> seen{};
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f_m, f_p, f_sigma;
    if (!std::getline(ss, f_m, ',') || !std::getline(ss, f_p, ',') ||
        !std::getline(ss, f_sigma))
      throw ParseError("data: malformed row " + std::to_string(row));
    try {
      const SpinState state(std::stoi(f_m));
      if (seen[state.index()])
        throw std::invalid_argument("duplicated m_F");
      seen[state.index()] = true;
      p[state.index()] = std::stod(f_p);
      sigma[state.index()] = std::stod(f_sigma);
    } catch (const std::exception& e) {
      throw ParseError("data: row " + std::to_string(row) + ": " + e.what());
    }
  }
  for (std::size_t i = 0; i < kNumSpinStates; ++i)
    if (!seen[i])
      throw ParseError("data: missing row for m_F = " +
                       std::to_string(3 - static_cast<int>(i)));
  try {
    return MeasuredPopulations(p, sigma);
  } catch (const std::exception& e) {
    throw ParseError(std::string("data: ") + e.what());
  }
}

std::string run_simulate(const RunConfig& config, const std::string& out_dir) {
  const auto provider = config.make_provider();
  const BathSpec bath = config.bath_spec();
  const ProbeSpec probe = config.probe_spec();
  const MagneticField b = config.field();
  const Temperature t = config.temperature();

  const RateMatrix q = build_rate_matrix(*provider, bath, probe, b, t);
  const SpinDistribution p0 = SpinDistribution::delta(probe.initial_state);
  const TimeTrace trace = evolve_trace(q, p0, time_grid(config));

  std::ostringstream csv;
  csv << column_header() << '\n';
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const SpinDistribution& p = trace.distributions[k];
    const ObservableSet obs = observables(p, b);
    std::vector<double> row = {trace.times[k]};
    for (std::size_t i = 0; i < kNumSpinStates; ++i)
      row.push_back(p.at_index(i));
    row.push_back(obs.entropy_over_kB);
    row.push_back(trace.n_endo[k]);
    row.push_back(trace.n_exo[k]);
    row.push_back(nK_from_kelvin(obs.energy_sigma / constants::k_boltzmann));
    append_row(csv, row);
  }
  write_file_atomic(out_dir + "/trace.csv", csv.str());

  const EntropyVsCollisions curve = entropy_vs_collisions(trace);
  const OverlapResult overlap = density_overlap(bath, probe);
  const ThreeBodyLoss loss =
      three_body_rate(config.l3_cm6_hz * 1e-12, overlap.n2_mean);

  json summary;
  summary["steady_state"] = populations_json(steady_state(q));
  summary["entropy_peak"] = {
      {"time_s", trace.times[curve.argmax]},
      {"entropy_kB", curve.entropy[curve.argmax]},
      {"n_spin", curve.n_spin[curve.argmax]},
  };
  summary["three_body"] = {{"rate_hz", loss.rate},
                           {"lifetime_s", loss.lifetime}};
  json endo_rates = json::object(), exo_rates = json::object();
  double rate_sum = 0.0;
  for (int m = -3; m <= 3; ++m) {
    const SpinState s(m);
    if (m <= 2) endo_rates["m" + std::to_string(m)] = q.endo_rate(s);
    if (m >= -2) exo_rates["m" + std::to_string(m)] = q.exo_rate(s);
    rate_sum += q.endo_rate(s) + q.exo_rate(s);
  }
  summary["rates_hz"] = {{"endo", endo_rates},
                         {"exo", exo_rates},
                         {"implied_gamma_el_hz", 10.0 * rate_sum}};
  summary["overlap"] = {{"n_mean_m3", overlap.n_mean},
                        {"n2_mean_m6", overlap.n2_mean}};
  summary["endoergic_fraction"] = endoergic_fraction(b, t);

  const std::string text = summary.dump(2) + "\n";
  write_file_atomic(out_dir + "/summary.json", text);
  return text;
}

std::string run_steady_state(const RunConfig& config,
                             const std::string& out_dir) {
  const auto provider = config.make_provider();
  const MagneticField b = config.field();
  const Temperature t = config.temperature();
  const SpinDistribution ss = steady_state_from_sigmas(*provider, b, t);
  const ObservableSet obs = observables(ss, b);

  json out;
  out["populations"] = populations_json(ss);
  out["entropy_kB"] = obs.entropy_over_kB;
  out["sigmaE_over_kB_nK"] =
      nK_from_kelvin(obs.energy_sigma / constants::k_boltzmann);
  out["mean_E_over_kB_nK"] =
      nK_from_kelvin(obs.mean_energy / constants::k_boltzmann);

  const std::string text = out.dump(2) + "\n";
  write_file_atomic(out_dir + "/steady_state.json", text);
  return text;
}

std::string run_estimate(const RunConfig& config, const std::string& data_file,
                         EstimateMode mode, double theta_lo, double theta_hi,
                         const std::string& out_dir) {
  const MeasuredPopulations data = load_measured_populations(data_file);
  const auto provider = config.make_provider();
  const BathSpec bath = config.bath_spec();
  const ProbeSpec probe = config.probe_spec();
  const SpinDistribution p0 = SpinDistribution::delta(probe.initial_state);
  const double t_int = config.time.t_max_s;

  // theta is SI internally (K or T); the data range arrives in nK / mG.
  auto model_at = [&](double theta, double b_tesla) {
    if (mode == EstimateMode::kTemperature) {
      BathSpec bath_theta = bath;
      bath_theta.temperature = Temperature(theta);
      const RateMatrix q =
          build_rate_matrix(*provider, bath_theta, probe,
                            MagneticField(b_tesla), Temperature(theta));
      return propagate(q, p0, t_int);
    }
    const RateMatrix q = build_rate_matrix(*provider, bath, probe,
                                           MagneticField(theta),
                                           config.temperature());
    return propagate(q, p0, t_int);
  };

  EstimateOptions options;
  options.log_spaced = mode == EstimateMode::kTemperature;

  double lo, hi;
  const MagneticField b0 = config.field();
  if (mode == EstimateMode::kTemperature) {
    lo = kelvin_from_nK(theta_lo);
    hi = kelvin_from_nK(theta_hi);
  } else {
    lo = tesla_from_mG(theta_lo);
    hi = tesla_from_mG(theta_hi);
  }

  auto map = [&](double theta) {
    return model_at(theta, mode == EstimateMode::kTemperature ? b0.tesla
                                                              : theta);
  };
  const EstimateResult result = estimate(data, map, lo, hi, options);

  json out;
  const bool is_temp = mode == EstimateMode::kTemperature;
  auto boundary = [&](double theta_si) {
    return is_temp ? nK_from_kelvin(theta_si) : mG_from_tesla(theta_si);
  };
  out["mode"] = is_temp ? "temperature" : "field";
  out["unit"] = is_temp ? "nK" : "mG";
  out["theta_hat"] = boundary(result.theta_hat);
  out["err_minus"] = boundary(result.err_minus);
  out["err_plus"] = boundary(result.err_plus);
  out["minus_clamped"] = result.minus_clamped;
  out["plus_clamped"] = result.plus_clamped;
  out["chi2_min"] = result.chi2_min;
  json curve = json::array();
  for (const auto& [theta, chi2] : result.chi2_curve)
    curve.push_back({{"theta", boundary(theta)}, {"chi2_nu", chi2}});
  out["chi2_curve"] = curve;

  if (is_temp) {
    auto model_tb = [&](double theta, double b_tesla) {
      return model_at(theta, b_tesla);
    };
    out["systematic_shift_nK"] = nK_from_kelvin(systematic_field_shift(
        data, model_tb, lo, hi, b0, tesla_from_mG(2.0), options));
  }

  const std::string text = out.dump(2) + "\n";
  write_file_atomic(out_dir + "/estimate.json", text);
  return text;
}

std::string run_sensitivity(const RunConfig& config, EstimateMode mode,
                            double delta_rel, const std::string& out_dir) {
  const auto provider = config.make_provider();
  const BathSpec bath = config.bath_spec();
  const ProbeSpec probe = config.probe_spec();
  const MagneticField b = config.field();
  const Temperature t = config.temperature();
  const ScanParameter theta = mode == EstimateMode::kTemperature
                                  ? ScanParameter::kTemperature
                                  : ScanParameter::kField;
  const double theta0 =
      theta == ScanParameter::kTemperature ? t.kelvin : b.tesla;

  const SensitivityTrace trace =
      sensitivity_trace(*provider, bath, probe, b, t, theta, time_grid(config),
                        delta_grid_for(theta0, delta_rel));

  std::ostringstream csv;
  csv << "t_s,sqrtF_mean,sqrtF_left,sqrtF_right,steady_sqrtF\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k)
    append_row(csv, {trace.times[k], trace.sqrt_f[k].mean,
                     trace.sqrt_f[k].left, trace.sqrt_f[k].right,
                     trace.steady_sqrt_f.mean});
  write_file_atomic(out_dir + "/sensitivity.csv", csv.str());

  std::size_t peak = 0;
  for (std::size_t k = 1; k < trace.sqrt_f.size(); ++k)
    if (trace.sqrt_f[k].mean > trace.sqrt_f[peak].mean) peak = k;

  json summary;
  summary["mode"] =
      mode == EstimateMode::kTemperature ? "temperature" : "field";
  summary["theta0"] = theta0;
  summary["peak"] = {{"time_s", trace.times[peak]},
                     {"sqrtF", trace.sqrt_f[peak].mean}};
  summary["steady_sqrtF"] = trace.steady_sqrt_f.mean;
  summary["peak_over_steady"] =
      trace.steady_sqrt_f.mean > 0.0
          ? trace.sqrt_f[peak].mean / trace.steady_sqrt_f.mean
          : 0.0;

  const std::string text = summary.dump(2) + "\n";
  write_file_atomic(out_dir + "/sensitivity_summary.json", text);
  return text;
}

std::string run_endo_fraction(const RunConfig& config,
                              const std::string& out_dir) {
  const MagneticField b = config.field();
  const Temperature t = config.temperature();
  json out;
  out["B_mG"] = b.mG();
  out["T_nK"] = t.nK();
  out["p_closed_form"] = endoergic_fraction(b, t);
  if (t.kelvin > 0.0) out["p_numeric"] = endoergic_fraction_numeric(b, t);
  const std::string text = out.dump(2) + "\n";
  write_file_atomic(out_dir + "/endo_fraction.json", text);
  return text;
}

std::string run_ssa(const RunConfig& config, std::uint64_t n_trajectories,
                    const std::string& out_dir) {
  const auto provider = config.make_provider();
  const RateMatrix q = build_rate_matrix(*provider, config.bath_spec(),
                                         config.probe_spec(), config.field(),
                                         config.temperature());
  const SpinDistribution p0 =
      SpinDistribution::delta(config.probe_spec().initial_state);
  const std::vector<double> checkpoints = {config.time.t_max_s / 4.0,
                                           config.time.t_max_s / 2.0,
                                           config.time.t_max_s};
  const SsaResult result =
      ssa_simulate(q, p0, checkpoints, n_trajectories, config.seed);

  json out;
  out["n_trajectories"] = result.n_trajectories;
  out["seed"] = result.rng_seed;
  json per_checkpoint = json::array();
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const SpinDistribution exact = propagate(q, p0, checkpoints[k]);
    double tv = 0.0;
    json occupancy = json::object();
    for (std::size_t i = 0; i < kNumSpinStates; ++i) {
      tv += std::abs(result.occupancy[k][i] - exact.at_index(i));
      occupancy["m" + std::to_string(3 - static_cast<int>(i))] =
          result.occupancy[k][i];
    }
    per_checkpoint.push_back({{"time_s", checkpoints[k]},
                              {"occupancy", occupancy},
                              {"mean_n_endo", result.mean_n_endo[k]},
                              {"mean_n_exo", result.mean_n_exo[k]},
                              {"stderr_n_endo", result.stderr_n_endo[k]},
                              {"stderr_n_exo", result.stderr_n_exo[k]},
                              {"tv_distance_to_exact", 0.5 * tv}});
  }
  out["checkpoints"] = per_checkpoint;
  const std::string text = out.dump(2) + "\n";
  write_file_atomic(out_dir + "/ssa.json", text);
  return text;
}

}  // namespace qprobe
