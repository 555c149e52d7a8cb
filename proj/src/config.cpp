#include "qprobe/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qprobe/errors.hpp"

namespace qprobe {
namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

using nlohmann::json;

template <typename T>
void read_field(const json& j, const std::string& path, const char* key,
                T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError("config: field '" + path + key + "': " + e.what());
  }
}

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0))
    throw ParseError("config: field '" + field + "' must be > 0");
}

}  // namespace

BathSpec RunConfig::bath_spec() const {
  return BathSpec(bath.n_rb, Temperature::from_nK(bath.temperature_nK),
                  kTwoPi * bath.omega_r_Hz, kTwoPi * bath.omega_z_Hz);
}

ProbeSpec RunConfig::probe_spec() const {
  return ProbeSpec(probe.n_cs, SpinState(probe.initial_mF), probe.trap_scale);
}

MagneticField RunConfig::field() const {
  return MagneticField::from_mG(field_mG);
}

Temperature RunConfig::temperature() const {
  return Temperature::from_nK(bath.temperature_nK);
}

std::unique_ptr<CrossSectionProvider> RunConfig::make_provider() const {
  if (cross_sections.mode == "synthetic") {
    SyntheticModel model(m2_from_cm2(cross_sections.sigma0_exo_cm2),
                         m2_from_cm2(cross_sections.sigma0_endo_cm2),
                         cross_sections.threshold_exponent);
    return std::make_unique<SyntheticProvider>(model);
  }
  if (cross_sections.mode == "table") {
    if (cross_sections.path.empty())
      throw ParseError("config: field 'cross_sections.path' required in "
                       "table mode");
    return std::make_unique<TableProvider>(load_tables(cross_sections.path));
  }
  throw ParseError("config: field 'cross_sections.mode' must be 'synthetic' "
                   "or 'table'");
}

RunConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig c;
  if (j.contains("bath")) {
    const json& b = j.at("bath");
    read_field(b, "bath.", "n_rb", c.bath.n_rb);
    read_field(b, "bath.", "temperature_nK", c.bath.temperature_nK);
    read_field(b, "bath.", "omega_r_Hz", c.bath.omega_r_Hz);
    read_field(b, "bath.", "omega_z_Hz", c.bath.omega_z_Hz);
  }
  if (j.contains("probe")) {
    const json& p = j.at("probe");
    read_field(p, "probe.", "n_cs", c.probe.n_cs);
    read_field(p, "probe.", "initial_mF", c.probe.initial_mF);
    read_field(p, "probe.", "trap_scale", c.probe.trap_scale);
  }
  read_field(j, "", "field_mG", c.field_mG);
  if (j.contains("cross_sections")) {
    const json& x = j.at("cross_sections");
    read_field(x, "cross_sections.", "mode", c.cross_sections.mode);
    read_field(x, "cross_sections.", "path", c.cross_sections.path);
    read_field(x, "cross_sections.", "sigma0_exo_cm2",
               c.cross_sections.sigma0_exo_cm2);
    read_field(x, "cross_sections.", "sigma0_endo_cm2",
               c.cross_sections.sigma0_endo_cm2);
    read_field(x, "cross_sections.", "threshold_exponent",
               c.cross_sections.threshold_exponent);
  }
  if (j.contains("time")) {
    const json& t = j.at("time");
    read_field(t, "time.", "t_max_s", c.time.t_max_s);
    read_field(t, "time.", "n_points", c.time.n_points);
  }
  read_field(j, "", "seed", c.seed);
  read_field(j, "", "l3_cm6_hz", c.l3_cm6_hz);

  require_positive(c.bath.n_rb, "bath.n_rb");
  require_positive(c.bath.temperature_nK, "bath.temperature_nK");
  require_positive(c.bath.omega_r_Hz, "bath.omega_r_Hz");
  require_positive(c.bath.omega_z_Hz, "bath.omega_z_Hz");
  if (!(c.probe.n_cs >= 1.0))
    throw ParseError("config: field 'probe.n_cs' must be >= 1");
  if (c.probe.initial_mF < -3 || c.probe.initial_mF > 3)
    throw ParseError("config: field 'probe.initial_mF' must be in [-3, 3]");
  require_positive(c.probe.trap_scale, "probe.trap_scale");
  if (!(c.field_mG >= 0.0))
    throw ParseError("config: field 'field_mG' must be >= 0");
  if (c.cross_sections.mode == "synthetic") {
    require_positive(c.cross_sections.sigma0_exo_cm2,
                     "cross_sections.sigma0_exo_cm2");
    require_positive(c.cross_sections.sigma0_endo_cm2,
                     "cross_sections.sigma0_endo_cm2");
    if (!(c.cross_sections.threshold_exponent >= 0.0))
      throw ParseError(
          "config: field 'cross_sections.threshold_exponent' must be >= 0");
  }
  require_positive(c.time.t_max_s, "time.t_max_s");
  if (c.time.n_points < 2)
    throw ParseError("config: field 'time.n_points' must be >= 2");
  if (!(c.l3_cm6_hz >= 0.0))
    throw ParseError("config: field 'l3_cm6_hz' must be >= 0");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

}  // namespace qprobe
