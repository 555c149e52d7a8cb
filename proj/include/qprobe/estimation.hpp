#pragma once

#include <array>
#include <functional>
#include <vector>

#include "qprobe/observables.hpp"
#include "qprobe/spin.hpp"

namespace qprobe {

// Experimental populations need not sum to 1; the uncertainties must be
// strictly positive.
struct MeasuredPopulations {
  std::array<double, kNumSpinStates> p_exp{};
  std::array<double, kNumSpinStates> sigma_exp{};

  MeasuredPopulations() = default;
  MeasuredPopulations(const std::array<double, kNumSpinStates>& p,
                      const std::array<double, kNumSpinStates>& sigma);
};

// Reduced chi^2 over the seven populations with nu = 7.
double chi2_nu(const MeasuredPopulations& data, const SpinDistribution& model);

// Delta chi^2 = 1 convention for the 1-sigma bounds: applied to the
// reduced statistic (as in the source analysis) by default, or to the
// unreduced chi^2 (textbook convention, an increase of 1/nu on chi^2_nu).
enum class ErrorBarConvention { kReducedPlusOne, kUnreducedPlusOne };

struct EstimateResult {
  double theta_hat = 0.0;
  double err_minus = 0.0;  // lower 1-sigma bound (absolute theta value)
  double err_plus = 0.0;   // upper 1-sigma bound
  bool minus_clamped = false;  // bound hit the scan range edge
  bool plus_clamped = false;
  double chi2_min = 0.0;
  std::vector<std::pair<double, double>> chi2_curve;  // (theta, chi2_nu)
};

struct EstimateOptions {
  std::size_t grid_points = 64;
  bool log_spaced = false;  // log grid for temperature scans
  double refine_rel_tol = 1e-4;
  ErrorBarConvention convention = ErrorBarConvention::kReducedPlusOne;
};

// Grid scan + golden-section refinement of chi2_nu(theta), with
// asymmetric error bounds from the Delta chi^2 crossing on each side.
// Throws when the minimum sits on a range boundary.
EstimateResult estimate(const MeasuredPopulations& data,
                        const PopulationMap& model_map, double theta_lo,
                        double theta_hi, const EstimateOptions& options = {});

// Systematic temperature error from field uncertainty: half the spread of
// theta_hat across fits at B0 - dB, B0 and B0 + dB.
double systematic_field_shift(
    const MeasuredPopulations& data,
    const std::function<SpinDistribution(double theta, double b_tesla)>&
        model_map,
    double theta_lo, double theta_hi, MagneticField b0, double db_tesla,
    const EstimateOptions& options = {});

}  // namespace qprobe
