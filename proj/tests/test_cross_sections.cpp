#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qprobe/cross_sections.hpp"
#include "qprobe/errors.hpp"
#include "qprobe/units.hpp"

using namespace qprobe;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path =
      (std::filesystem::temp_directory_path() / name).string();
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return path;
}

const char* kGoodHeader = "initial_mF,direction,B_mG,Ec_nK,sigma_cm2\n";

}  // namespace

TEST_SUITE_BEGIN("cross_sections");

TEST_CASE("channel enumeration and validation") {
  const auto channels = all_channels();
  CHECK(channels.size() == 12);
  int endo = 0, exo = 0;
  for (const auto& c : channels)
    (c.direction == SpinExchangeDirection::kEndoergic ? endo : exo)++;
  CHECK(endo == 6);
  CHECK(exo == 6);

  CHECK_THROWS_AS(
      CollisionChannel(SpinState(3), SpinExchangeDirection::kEndoergic),
      std::invalid_argument);
  CHECK_THROWS_AS(
      CollisionChannel(SpinState(-3), SpinExchangeDirection::kExoergic),
      std::invalid_argument);

  const CollisionChannel up(SpinState(1), SpinExchangeDirection::kEndoergic);
  CHECK(up.final_state().m_F == 2);
  const CollisionChannel down(SpinState(1), SpinExchangeDirection::kExoergic);
  CHECK(down.final_state().m_F == 0);
}

TEST_CASE("channel thresholds") {
  const MagneticField b = MagneticField::from_mG(40.0);
  const CollisionChannel endo(SpinState(0), SpinExchangeDirection::kEndoergic);
  const CollisionChannel exo(SpinState(0), SpinExchangeDirection::kExoergic);
  CHECK(channel_threshold_energy(endo, b) ==
        doctest::Approx(constants::bohr_magneton * b.tesla / 4.0));
  CHECK(channel_threshold_energy(exo, b) == 0.0);
}

TEST_CASE("synthetic model threshold law") {
  const SyntheticModel model(2e-16, 4e-16, 0.5);
  const MagneticField b = MagneticField::from_mG(40.0);
  const CollisionChannel endo(SpinState(1), SpinExchangeDirection::kEndoergic);
  const CollisionChannel exo(SpinState(1), SpinExchangeDirection::kExoergic);
  const double eth = channel_threshold_energy(endo, b);

  CHECK(synthetic_sigma(model, exo, b, 0.0) == 2e-16);
  CHECK(synthetic_sigma(model, exo, b, 10.0 * eth) == 2e-16);
  CHECK(synthetic_sigma(model, endo, b, 0.5 * eth) == 0.0);
  CHECK(synthetic_sigma(model, endo, b, eth) == 0.0);
  CHECK(synthetic_sigma(model, endo, b, 2.0 * eth) ==
        doctest::Approx(4e-16 * std::sqrt(0.5)).epsilon(1e-12));
  // Far above threshold the suppression factor approaches 1.
  CHECK(synthetic_sigma(model, endo, b, 1e4 * eth) ==
        doctest::Approx(4e-16).epsilon(1e-3));
  CHECK_THROWS_AS(synthetic_sigma(model, endo, b, -1.0),
                  std::invalid_argument);
}

TEST_CASE("synthetic per-channel overrides") {
  SyntheticModel model(2e-16, 2e-16, 0.5);
  const CollisionChannel special(SpinState(0),
                                 SpinExchangeDirection::kExoergic);
  model.sigma0_override[special] = 7e-16;
  const MagneticField b = MagneticField::from_mG(10.0);
  CHECK(synthetic_sigma(model, special, b, 1e-30) == 7e-16);
  const CollisionChannel other(SpinState(1), SpinExchangeDirection::kExoergic);
  CHECK(synthetic_sigma(model, other, b, 1e-30) == 2e-16);
}

TEST_CASE("synthetic model rejects bad parameters") {
  CHECK_THROWS_AS(SyntheticModel(0.0, 1e-16, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SyntheticModel(1e-16, 1e-16, -1.0), std::invalid_argument);
}

TEST_CASE("table provider interpolates bilinearly") {
  CrossSectionTable t;
  t.channel = CollisionChannel(SpinState(1), SpinExchangeDirection::kExoergic);
  t.b_grid = {1e-6, 3e-6};
  t.ec_grid = {1e-30, 3e-30};
  t.sigma = {{1e-16, 2e-16}, {3e-16, 4e-16}};
  const TableProvider provider({t});

  CHECK(provider.has_channel(t.channel));
  CHECK_FALSE(provider.has_channel(
      CollisionChannel(SpinState(1), SpinExchangeDirection::kEndoergic)));

  // Exact at the nodes.
  CHECK(provider.sigma(t.channel, MagneticField(1e-6), 1e-30) ==
        doctest::Approx(1e-16));
  CHECK(provider.sigma(t.channel, MagneticField(3e-6), 3e-30) ==
        doctest::Approx(4e-16));
  // Cell midpoint is the average of the four corners.
  CHECK(provider.sigma(t.channel, MagneticField(2e-6), 2e-30) ==
        doctest::Approx(2.5e-16).epsilon(1e-12));
  // Out-of-range queries are hard errors, not extrapolations.
  CHECK_THROWS_AS(provider.sigma(t.channel, MagneticField(4e-6), 2e-30),
                  std::out_of_range);
  CHECK_THROWS_AS(provider.sigma(t.channel, MagneticField(2e-6), 4e-30),
                  std::out_of_range);
  const auto [lo, hi] = provider.energy_domain(t.channel, MagneticField(2e-6));
  CHECK(lo == 1e-30);
  CHECK(hi == 3e-30);
}

TEST_CASE("table validation rejects threshold violations") {
  CrossSectionTable t;
  t.channel = CollisionChannel(SpinState(1), SpinExchangeDirection::kEndoergic);
  t.b_grid = {tesla_from_mG(40.0)};
  const double eth = constants::bohr_magneton * tesla_from_mG(40.0) / 4.0;
  t.ec_grid = {0.5 * eth, 2.0 * eth};
  t.sigma = {{1e-16, 1e-16}};  // nonzero below threshold
  CHECK_THROWS_AS(TableProvider({t}), std::invalid_argument);
  t.sigma = {{0.0, 1e-16}};
  CHECK_NOTHROW(TableProvider({t}));
}

TEST_CASE("csv loader round-trips a rectangular grid") {
  std::string csv = kGoodHeader;
  for (const char* dir : {"endo", "exo"})
    for (double b : {10.0, 40.0})
      for (double ec : {100.0, 5000.0, 20000.0}) {
        // Endoergic entries below threshold are written as zero.
        const double eth_nK =
            constants::bohr_magneton * tesla_from_mG(b) /
            (4.0 * constants::k_boltzmann) * 1e9;
        const double s =
            (std::string(dir) == "endo" && ec <= eth_nK) ? 0.0 : 3e-12;
        csv += "1," + std::string(dir) + "," + std::to_string(b) + "," +
               std::to_string(ec) + "," + std::to_string(s) + "\n";
      }
  const auto path = write_temp("qprobe_tables_good.csv", csv);
  const auto tables = load_tables(path);
  CHECK(tables.size() == 2);
  const TableProvider provider(tables);
  const CollisionChannel exo(SpinState(1), SpinExchangeDirection::kExoergic);
  CHECK(provider.sigma(exo, MagneticField::from_mG(25.0),
                       constants::k_boltzmann * kelvin_from_nK(1000.0)) ==
        doctest::Approx(m2_from_cm2(3e-12)).epsilon(1e-9));
}

TEST_CASE("csv loader rejects malformed input") {
  CHECK_THROWS_AS(load_tables("/nonexistent/qprobe.csv"), ParseError);

  const auto bad_header =
      write_temp("qprobe_tables_h.csv", "mF,dir,B,Ec,sigma\n1,exo,1,1,1\n");
  CHECK_THROWS_AS(load_tables(bad_header), ParseError);

  const auto bad_dir = write_temp(
      "qprobe_tables_d.csv",
      std::string(kGoodHeader) + "1,sideways,10,100,3e-12\n");
  CHECK_THROWS_AS(load_tables(bad_dir), ParseError);

  const auto negative = write_temp(
      "qprobe_tables_n.csv",
      std::string(kGoodHeader) + "1,exo,10,100,-3e-12\n");
  CHECK_THROWS_AS(load_tables(negative), ParseError);

  // Missing one point of the cartesian closure.
  const auto holes = write_temp(
      "qprobe_tables_c.csv",
      std::string(kGoodHeader) + "1,exo,10,100,3e-12\n1,exo,10,200,3e-12\n" +
          "1,exo,20,100,3e-12\n");
  CHECK_THROWS_AS(load_tables(holes), ParseError);

  const auto dup = write_temp(
      "qprobe_tables_dup.csv",
      std::string(kGoodHeader) + "1,exo,10,100,3e-12\n1,exo,10,100,4e-12\n");
  CHECK_THROWS_AS(load_tables(dup), ParseError);
}

TEST_SUITE_END();
