#include "pwave/config.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <sstream>

#include "pwave/errors.hpp"

namespace pwave {

namespace {

constexpr std::array<ConfigKey, 24> kKeys{{
    {"energy", "laser pulse energy, erg"},
    {"wavelength", "laser wavelength, cm"},
    {"fwhm", "width at half height l' of the intensity, cm"},
    {"polarization", "linear | circular"},
    {"aspect", "spot radius over displacement, nu"},
    {"turning", "turning-point offset rule: lp (fraction of l_p) | cm | fwhm (fraction of l')"},
    {"turning_value", "offset value for the turning rule"},
    {"ionization_ev", "ionization potential U_i, eV"},
    {"tabulation_polarization", "tabulate with this polarization: linear | circular"},
    {"density", "fixed n0 for slingshot instead of the turning-point solve, cm^-3"},
    {"bound_samples", "number of points for the transverse bound check"},
    {"grid_n", "grid intervals over the pulse"},
    {"n0", "tabulate: electron density, cm^-3"},
    {"k", "tabulate: plasma constant K, cm^-2"},
    {"k_xi0_sq", "tabulate: dimensionless K xi0^2"},
    {"envelope", "trajectory: gaussian | polynomial | sampled"},
    {"envelope_csv", "trajectory: sampled envelope file (xi_cm,w)"},
    {"mode", "trajectory: averaged | oscillatory"},
    {"labels", "trajectory: comma-separated initial positions Z, cm"},
    {"x0_min", "trajectory: first time c t, cm"},
    {"x0_max", "trajectory: last time c t, cm"},
    {"samples", "trajectory: time samples per label"},
    {"stride", "tabulate: write every stride-th grid node"},
    {"inject_fault", "validate: none | monotone (negative control)"},
}};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("key '" + key + "': '" + value + "' is not a finite number");
}

double to_positive(const std::string& key, const std::string& value) {
  const double v = to_number(key, value);
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

double to_nonnegative(const std::string& key, const std::string& value) {
  const double v = to_number(key, value);
  if (!(v >= 0.0)) throw ConfigError("key '" + key + "' must be >= 0");
  return v;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  const double v = to_number(key, value);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw ConfigError("key '" + key + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

Polarization to_polarization(const std::string& key, const std::string& value) {
  if (value == "linear") return Polarization::linear;
  if (value == "circular") return Polarization::circular;
  throw ConfigError("key '" + key + "': expected linear or circular");
}

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "energy") {
    c.laser.energy = to_nonnegative(key, value);
  } else if (key == "wavelength") {
    c.laser.wavelength = to_positive(key, value);
  } else if (key == "fwhm") {
    c.laser.fwhm = to_positive(key, value);
  } else if (key == "polarization") {
    c.laser.polarization = to_polarization(key, value);
  } else if (key == "aspect") {
    c.laser.aspect = to_positive(key, value);
  } else if (key == "turning") {
    using K = TurningPolicy::Kind;
    if (value == "lp") {
      c.scenario.turning.kind = K::fraction_of_lp;
    } else if (value == "cm") {
      c.scenario.turning.kind = K::absolute_cm;
    } else if (value == "fwhm") {
      c.scenario.turning.kind = K::fraction_of_fwhm;
    } else {
      throw ConfigError("key 'turning': expected lp, cm or fwhm");
    }
  } else if (key == "turning_value") {
    c.scenario.turning.value = to_number(key, value);
  } else if (key == "ionization_ev") {
    c.scenario.ionization_ev = to_positive(key, value);
  } else if (key == "tabulation_polarization") {
    c.scenario.tabulation_polarization = to_polarization(key, value);
  } else if (key == "density") {
    c.scenario.density_override = to_nonnegative(key, value);
  } else if (key == "bound_samples") {
    c.scenario.bound_samples = to_count(key, value);
  } else if (key == "grid_n") {
    c.scenario.grid_intervals = to_count(key, value);
  } else if (key == "n0") {
    c.n0 = to_nonnegative(key, value);
  } else if (key == "k") {
    c.k = to_nonnegative(key, value);
  } else if (key == "k_xi0_sq") {
    c.k_xi0_sq = to_nonnegative(key, value);
  } else if (key == "envelope") {
    if (value == "gaussian") {
      c.envelope = EnvelopeChoice::gaussian;
    } else if (value == "polynomial") {
      c.envelope = EnvelopeChoice::polynomial;
    } else if (value == "sampled") {
      c.envelope = EnvelopeChoice::sampled;
    } else {
      throw ConfigError("key 'envelope': expected gaussian, polynomial or sampled");
    }
  } else if (key == "envelope_csv") {
    c.envelope_csv = value;
  } else if (key == "mode") {
    if (value == "averaged") {
      c.mode = PulseMode::averaged;
    } else if (value == "oscillatory") {
      c.mode = PulseMode::oscillatory;
    } else {
      throw ConfigError("key 'mode': expected averaged or oscillatory");
    }
  } else if (key == "labels") {
    std::vector<double> labels;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) labels.push_back(to_number(key, trim(item)));
    if (labels.empty()) throw ConfigError("key 'labels': empty list");
    c.labels = std::move(labels);
  } else if (key == "x0_min") {
    c.x0_min = to_number(key, value);
  } else if (key == "x0_max") {
    c.x0_max = to_number(key, value);
  } else if (key == "samples") {
    c.samples = to_count(key, value);
  } else if (key == "stride") {
    c.stride = to_count(key, value);
  } else if (key == "inject_fault") {
    if (value != "none" && value != "monotone") {
      throw ConfigError("key 'inject_fault': expected none or monotone");
    }
    c.inject_fault = value;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

std::map<std::string, std::string> parse_config_text(std::istream& in) {
  return read_keyvalue(in);
}

RunConfig make_config(const std::map<std::string, std::string>& settings) {
  RunConfig c;
  for (const auto& [key, value] : settings) apply_setting(c, key, value);
  check_config(c);
  return c;
}

void check_config(const RunConfig& c) {
  const int plasma_keys = int(c.n0.has_value()) + int(c.k.has_value()) + int(c.k_xi0_sq.has_value());
  if (plasma_keys > 1) throw ConfigError("set at most one of n0, k, k_xi0_sq");
  if (c.envelope == EnvelopeChoice::sampled && c.envelope_csv.empty()) {
    throw ConfigError("envelope = sampled needs envelope_csv");
  }
  if (c.x0_min && c.x0_max && !(*c.x0_max > *c.x0_min)) {
    throw ConfigError("x0_max must exceed x0_min");
  }
  try {
    validate(c.laser);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace pwave
