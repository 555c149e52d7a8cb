#pragma once

#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qprobe/spin.hpp"
#include "qprobe/units.hpp"

namespace qprobe {

// Direction convention (fixed by the starting-state phenomenology):
// endoergic moves the probe m_F -> m_F + 1 and needs collision energy above
// the Zeeman step; exoergic moves m_F -> m_F - 1 and is always allowed.
enum class SpinExchangeDirection { kEndoergic, kExoergic };

struct CollisionChannel {
  SpinState initial;
  SpinExchangeDirection direction = SpinExchangeDirection::kExoergic;

  CollisionChannel() = default;
  CollisionChannel(SpinState initial_state, SpinExchangeDirection dir)
      : initial(initial_state), direction(dir) {
    if (direction == SpinExchangeDirection::kEndoergic && initial.m_F > 2)
      throw std::invalid_argument(
          "CollisionChannel: endoergic channel requires initial m_F <= +2");
    if (direction == SpinExchangeDirection::kExoergic && initial.m_F < -2)
      throw std::invalid_argument(
          "CollisionChannel: exoergic channel requires initial m_F >= -2");
  }

  SpinState final_state() const {
    return SpinState(direction == SpinExchangeDirection::kEndoergic
                         ? initial.m_F + 1
                         : initial.m_F - 1);
  }

  bool operator<(const CollisionChannel& o) const {
    if (initial.m_F != o.initial.m_F) return initial.m_F < o.initial.m_F;
    return direction < o.direction;
  }
  bool operator==(const CollisionChannel& o) const {
    return initial.m_F == o.initial.m_F && direction == o.direction;
  }
};

// All 12 spin-exchange channels: 6 endoergic (m_F in -3..+2) and
// 6 exoergic (m_F in -2..+3).
std::vector<CollisionChannel> all_channels();

// Collision-energy threshold of a channel: mu_B B / 4 for endoergic
// channels (one Zeeman step of the probe), 0 for exoergic ones.
inline double channel_threshold_energy(CollisionChannel c, MagneticField b) {
  if (c.direction == SpinExchangeDirection::kEndoergic)
    return zeeman_half_splitting(b);
  return 0.0;
}

// sigma(channel, B, E_c) in m^2. Implementations are immutable after
// construction; concurrent queries are allowed.
class CrossSectionProvider {
 public:
  virtual ~CrossSectionProvider() = default;

  virtual bool has_channel(CollisionChannel c) const = 0;
  virtual double sigma(CollisionChannel c, MagneticField b,
                       double collision_energy) const = 0;
  // Collision-energy range over which sigma may be queried at field b;
  // {0, +inf} for analytic models.
  virtual std::pair<double, double> energy_domain(CollisionChannel c,
                                                  MagneticField b) const = 0;
};

// Tabulated sigma(B, E_c) on a rectangular grid, bilinearly interpolated.
struct CrossSectionTable {
  CollisionChannel channel;
  std::vector<double> b_grid;   // T, strictly increasing
  std::vector<double> ec_grid;  // J, strictly increasing
  std::vector<std::vector<double>> sigma;  // [b][ec], m^2
};

class TableProvider : public CrossSectionProvider {
 public:
  explicit TableProvider(std::vector<CrossSectionTable> tables);

  bool has_channel(CollisionChannel c) const override;
  double sigma(CollisionChannel c, MagneticField b,
               double collision_energy) const override;
  std::pair<double, double> energy_domain(CollisionChannel c,
                                          MagneticField b) const override;

 private:
  std::map<CollisionChannel, CrossSectionTable> tables_;
};

// CSV schema: header `initial_mF,direction,B_mG,Ec_nK,sigma_cm2`,
// direction in {endo, exo}. The grid per channel is the cartesian closure
// of the listed (B, Ec) points; missing points are a parse error.
std::vector<CrossSectionTable> load_tables(const std::string& path);

// Threshold-law stand-in for the coupled-channel cross sections:
// exoergic sigma is flat, endoergic sigma is
// sigma0 * (1 - E_th/E_c)^exponent above threshold and 0 below.
struct SyntheticModel {
  double sigma0_exo = 0.0;        // m^2
  double sigma0_endo = 0.0;       // m^2
  double threshold_exponent = 0.5;
  // Optional per-channel prefactor overrides.
  std::map<CollisionChannel, double> sigma0_override;

  SyntheticModel() = default;
  SyntheticModel(double s0_exo, double s0_endo, double exponent = 0.5);

  double sigma0_for(CollisionChannel c) const;
};

double synthetic_sigma(const SyntheticModel& model, CollisionChannel c,
                       MagneticField b, double collision_energy);

class SyntheticProvider : public CrossSectionProvider {
 public:
  explicit SyntheticProvider(SyntheticModel model) : model_(model) {}

  bool has_channel(CollisionChannel) const override { return true; }
  double sigma(CollisionChannel c, MagneticField b,
               double collision_energy) const override {
    return synthetic_sigma(model_, c, b, collision_energy);
  }
  std::pair<double, double> energy_domain(CollisionChannel,
                                          MagneticField) const override {
    return {0.0, std::numeric_limits<double>::infinity()};
  }

 private:
  SyntheticModel model_;
};

}  // namespace qprobe
