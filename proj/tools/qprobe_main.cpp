#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qprobe/errors.hpp"
#include "qprobe/runners.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-atom spin-probe simulator: rate-model dynamics, "
               "steady-state thermometry and nonequilibrium sensitivity"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "JSON run configuration")
      ->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed_override, "override the config RNG seed")
      ->each([&](const std::string&) { seed_given = true; });

  auto* simulate = app.add_subcommand(
      "simulate", "time trace of the spin populations and observables");
  simulate->fallthrough();
  auto* steady =
      app.add_subcommand("steady-state", "steady-state spin distribution");
  steady->fallthrough();

  auto* estimate = app.add_subcommand(
      "estimate", "chi^2 extraction of T_spin or B_spin from data");
  estimate->fallthrough();
  std::string data_file;
  std::string estimate_mode = "temperature";
  double theta_lo = 0.0, theta_hi = 0.0;
  estimate->add_option("--data", data_file, "CSV: mF,p_exp,sigma_exp")
      ->required();
  estimate->add_option("--mode", estimate_mode, "temperature|field")
      ->check(CLI::IsMember({"temperature", "field"}));
  estimate->add_option("--theta-min", theta_lo,
                       "scan range lower bound (nK or mG)");
  estimate->add_option("--theta-max", theta_hi,
                       "scan range upper bound (nK or mG)");

  auto* sensitivity = app.add_subcommand(
      "sensitivity", "time-resolved sqrt(Fisher) sensitivity trace");
  sensitivity->fallthrough();
  std::string sens_mode = "temperature";
  double delta_rel = 0.02;
  sensitivity->add_option("--mode", sens_mode, "temperature|field")
      ->check(CLI::IsMember({"temperature", "field"}));
  sensitivity->add_option("--delta-rel", delta_rel,
                          "largest offset as a fraction of theta0");

  auto* endo = app.add_subcommand("endo-fraction",
                                  "endoergic fraction p(B,T) at the "
                                  "configured field and temperature");
  endo->fallthrough();

  auto* ssa = app.add_subcommand(
      "ssa", "stochastic jump-process cross-check of the rate model");
  ssa->fallthrough();
  std::uint64_t n_traj = 100000;
  ssa->add_option("--trajectories", n_traj, "number of trajectories");

  CLI11_PARSE(app, argc, argv);

  try {
    qprobe::RunConfig config = qprobe::load_config(config_path);
    if (seed_given) config.seed = seed_override;

    std::string summary;
    if (simulate->parsed()) {
      summary = qprobe::run_simulate(config, out_dir);
    } else if (steady->parsed()) {
      summary = qprobe::run_steady_state(config, out_dir);
    } else if (estimate->parsed()) {
      const bool is_temp = estimate_mode == "temperature";
      if (theta_lo == 0.0 && theta_hi == 0.0) {
        theta_lo = is_temp ? 100.0 : 1.0;
        theta_hi = is_temp ? 2000.0 : 100.0;
      }
      summary = qprobe::run_estimate(
          config, data_file,
          is_temp ? qprobe::EstimateMode::kTemperature
                  : qprobe::EstimateMode::kField,
          theta_lo, theta_hi, out_dir);
    } else if (sensitivity->parsed()) {
      summary = qprobe::run_sensitivity(
          config, sens_mode == "temperature"
                      ? qprobe::EstimateMode::kTemperature
                      : qprobe::EstimateMode::kField,
          delta_rel, out_dir);
    } else if (endo->parsed()) {
      summary = qprobe::run_endo_fraction(config, out_dir);
    } else if (ssa->parsed()) {
      summary = qprobe::run_ssa(config, n_traj, out_dir);
    }
    std::cout << summary;
  } catch (const qprobe::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalError;
  }
  return 0;
}
