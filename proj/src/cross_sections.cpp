#include "qprobe/cross_sections.hpp"

#include <algorithm>

#include "qprobe/errors.hpp"
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qprobe {

std::vector<CollisionChannel> all_channels() {
  std::vector<CollisionChannel> out;
  for (int m = -3; m <= 2; ++m)
    out.emplace_back(SpinState(m), SpinExchangeDirection::kEndoergic);
  for (int m = -2; m <= 3; ++m)
    out.emplace_back(SpinState(m), SpinExchangeDirection::kExoergic);
  return out;
}

namespace {

std::size_t lower_cell(const std::vector<double>& grid, double x) {
  // Index i with grid[i] <= x <= grid[i+1]; caller guarantees range.
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i > 0) --i;
  if (i + 1 >= grid.size()) i = grid.size() - 2;
  return i;
}

void validate_table(const CrossSectionTable& t) {
  if (t.b_grid.empty() || t.ec_grid.empty())
    throw std::invalid_argument("CrossSectionTable: empty grid");
  for (std::size_t i = 1; i < t.b_grid.size(); ++i)
    if (!(t.b_grid[i] > t.b_grid[i - 1]))
      throw std::invalid_argument("CrossSectionTable: B grid not increasing");
  for (std::size_t i = 1; i < t.ec_grid.size(); ++i)
    if (!(t.ec_grid[i] > t.ec_grid[i - 1]))
      throw std::invalid_argument("CrossSectionTable: Ec grid not increasing");
  if (t.sigma.size() != t.b_grid.size())
    throw std::invalid_argument("CrossSectionTable: sigma row count mismatch");
  for (std::size_t ib = 0; ib < t.b_grid.size(); ++ib) {
    if (t.sigma[ib].size() != t.ec_grid.size())
      throw std::invalid_argument(
          "CrossSectionTable: sigma column count mismatch");
    const double threshold =
        channel_threshold_energy(t.channel, MagneticField(t.b_grid[ib]));
    for (std::size_t ie = 0; ie < t.ec_grid.size(); ++ie) {
      const double s = t.sigma[ib][ie];
      if (!(s >= 0.0))
        throw std::invalid_argument("CrossSectionTable: negative sigma");
      if (t.ec_grid[ie] <= threshold && s > 0.0)
        throw std::invalid_argument(
            "CrossSectionTable: threshold violation (endoergic sigma > 0 "
            "below mu_B B/4)");
    }
  }
}

}  // namespace

TableProvider::TableProvider(std::vector<CrossSectionTable> tables) {
  for (auto& t : tables) {
    validate_table(t);
    auto key = t.channel;
    if (!tables_.emplace(key, std::move(t)).second)
      throw std::invalid_argument("TableProvider: duplicate channel table");
  }
}

bool TableProvider::has_channel(CollisionChannel c) const {
  return tables_.count(c) > 0;
}

double TableProvider::sigma(CollisionChannel c, MagneticField b,
                            double e_c) const {
  auto it = tables_.find(c);
  if (it == tables_.end())
    throw std::out_of_range("TableProvider: channel not tabulated");
  const CrossSectionTable& t = it->second;
  if (b.tesla < t.b_grid.front() || b.tesla > t.b_grid.back())
    throw std::out_of_range("TableProvider: B outside tabulated range");
  if (e_c < t.ec_grid.front() || e_c > t.ec_grid.back())
    throw std::out_of_range("TableProvider: E_c outside tabulated range");
  // Endoergic channels are exactly zero at and below threshold, independent
  // of what interpolation would give near the edge.
  if (e_c <= channel_threshold_energy(c, b)) return 0.0;

  const std::size_t ib = lower_cell(t.b_grid, b.tesla);
  const std::size_t ie = lower_cell(t.ec_grid, e_c);
  const double tb =
      (b.tesla - t.b_grid[ib]) / (t.b_grid[ib + 1] - t.b_grid[ib]);
  const double te =
      (e_c - t.ec_grid[ie]) / (t.ec_grid[ie + 1] - t.ec_grid[ie]);
  const double s00 = t.sigma[ib][ie];
  const double s01 = t.sigma[ib][ie + 1];
  const double s10 = t.sigma[ib + 1][ie];
  const double s11 = t.sigma[ib + 1][ie + 1];
  return (1.0 - tb) * ((1.0 - te) * s00 + te * s01) +
         tb * ((1.0 - te) * s10 + te * s11);
}

std::pair<double, double> TableProvider::energy_domain(CollisionChannel c,
                                                       MagneticField b) const {
  auto it = tables_.find(c);
  if (it == tables_.end())
    throw std::out_of_range("TableProvider: channel not tabulated");
  const CrossSectionTable& t = it->second;
  if (b.tesla < t.b_grid.front() || b.tesla > t.b_grid.back())
    throw std::out_of_range("TableProvider: B outside tabulated range");
  return {t.ec_grid.front(), t.ec_grid.back()};
}

std::vector<CrossSectionTable> load_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_tables: cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("load_tables: empty file " + path);
  // Tolerate a UTF-8 BOM and trailing CR.
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "initial_mF,direction,B_mG,Ec_nK,sigma_cm2")
    throw ParseError(
        "load_tables: bad header, expected "
        "'initial_mF,direction,B_mG,Ec_nK,sigma_cm2'");

  struct Point {
    double b, ec, sigma;
    int row;
  };
  std::map<CollisionChannel, std::vector<Point>> points;

  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f_mF, f_dir, f_b, f_ec, f_sigma;
    if (!std::getline(ss, f_mF, ',') || !std::getline(ss, f_dir, ',') ||
        !std::getline(ss, f_b, ',') || !std::getline(ss, f_ec, ',') ||
        !std::getline(ss, f_sigma))
      throw ParseError("load_tables: malformed row " +
                               std::to_string(row));
    CollisionChannel channel;
    double b_T, ec_J, sigma_m2;
    try {
      const int m = std::stoi(f_mF);
      SpinExchangeDirection dir;
      if (f_dir == "endo")
        dir = SpinExchangeDirection::kEndoergic;
      else if (f_dir == "exo")
        dir = SpinExchangeDirection::kExoergic;
      else
        throw std::invalid_argument("direction must be endo or exo");
      channel = CollisionChannel(SpinState(m), dir);
      b_T = tesla_from_mG(std::stod(f_b));
      ec_J = constants::k_boltzmann * kelvin_from_nK(std::stod(f_ec));
      sigma_m2 = m2_from_cm2(std::stod(f_sigma));
    } catch (const std::exception& e) {
      throw ParseError("load_tables: row " + std::to_string(row) +
                               ": " + e.what());
    }
    if (sigma_m2 < 0.0)
      throw ParseError("load_tables: row " + std::to_string(row) +
                               ": negative sigma");
    points[channel].push_back({b_T, ec_J, sigma_m2, row});
  }

  std::vector<CrossSectionTable> out;
  for (auto& [channel, pts] : points) {
    std::set<double> bs, ecs;
    for (const auto& p : pts) {
      bs.insert(p.b);
      ecs.insert(p.ec);
    }
    CrossSectionTable t;
    t.channel = channel;
    t.b_grid.assign(bs.begin(), bs.end());
    t.ec_grid.assign(ecs.begin(), ecs.end());
    t.sigma.assign(t.b_grid.size(),
                   std::vector<double>(t.ec_grid.size(),
                                       std::numeric_limits<double>::quiet_NaN()));
    for (const auto& p : pts) {
      const std::size_t ib = static_cast<std::size_t>(
          std::lower_bound(t.b_grid.begin(), t.b_grid.end(), p.b) -
          t.b_grid.begin());
      const std::size_t ie = static_cast<std::size_t>(
          std::lower_bound(t.ec_grid.begin(), t.ec_grid.end(), p.ec) -
          t.ec_grid.begin());
      if (!std::isnan(t.sigma[ib][ie]))
        throw ParseError("load_tables: row " + std::to_string(p.row) +
                                 ": duplicate (B, Ec) grid point");
      t.sigma[ib][ie] = p.sigma;
    }
    for (const auto& col : t.sigma)
      for (double s : col)
        if (std::isnan(s))
          throw ParseError(
              "load_tables: channel grid is not a full cartesian product");
    try {
      validate_table(t);
    } catch (const std::exception& e) {
      throw ParseError(std::string("load_tables: ") + e.what());
    }
    out.push_back(std::move(t));
  }
  return out;
}

SyntheticModel::SyntheticModel(double s0_exo, double s0_endo, double exponent)
    : sigma0_exo(s0_exo), sigma0_endo(s0_endo), threshold_exponent(exponent) {
  if (!(sigma0_exo > 0.0) || !(sigma0_endo > 0.0))
    throw std::invalid_argument("SyntheticModel: sigma0 must be > 0");
  if (!(threshold_exponent >= 0.0))
    throw std::invalid_argument("SyntheticModel: exponent must be >= 0");
}

double SyntheticModel::sigma0_for(CollisionChannel c) const {
  auto it = sigma0_override.find(c);
  if (it != sigma0_override.end()) return it->second;
  return c.direction == SpinExchangeDirection::kEndoergic ? sigma0_endo
                                                          : sigma0_exo;
}

double synthetic_sigma(const SyntheticModel& model, CollisionChannel c,
                       MagneticField b, double e_c) {
  if (!(e_c >= 0.0))
    throw std::invalid_argument("synthetic_sigma: E_c must be >= 0");
  const double s0 = model.sigma0_for(c);
  if (c.direction == SpinExchangeDirection::kExoergic) return s0;
  const double threshold = channel_threshold_energy(c, b);
  if (e_c <= threshold) return 0.0;
  return s0 * std::pow(1.0 - threshold / e_c, model.threshold_exponent);
}

}  // namespace qprobe
