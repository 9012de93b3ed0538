#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwave/pulse.hpp"
#include "pwave/slingshot.hpp"

namespace pwave {

enum class EnvelopeChoice { gaussian, polynomial, sampled };

/// Parameters of every CLI command. Defaults describe the FLAME laser with
/// nu = 1 and linear polarization.
struct RunConfig {
  LaserSpec laser{5.0e7, 8.0e-5, 7.5e-4, Polarization::linear, 1.0};
  ScenarioOptions scenario{};

  // Plasma for `tabulate`; at most one is set. None: solved per envelope
  // from the turning policy.
  std::optional<double> n0;        // cm^-3
  std::optional<double> k;         // cm^-2
  std::optional<double> k_xi0_sq;  // K xi0^2

  // Pulse for `trajectory`.
  EnvelopeChoice envelope = EnvelopeChoice::polynomial;
  std::string envelope_csv;
  PulseMode mode = PulseMode::averaged;
  std::vector<double> labels{0.0};  // Z, cm
  std::optional<double> x0_min;     // cm
  std::optional<double> x0_max;     // cm
  std::size_t samples = 400;

  std::size_t stride = 1;
  std::string inject_fault = "none";
};

struct ConfigKey {
  const char* name;
  const char* help;
};

/// Every accepted key, in documentation order.
std::span<const ConfigKey> config_keys();

/// Sets one key; throws ConfigError for unknown keys and bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses `key = value` lines (`#` comments) into settings.
std::map<std::string, std::string> parse_config_text(std::istream& in);

/// Applies settings in key order, then checks cross-key constraints.
RunConfig make_config(const std::map<std::string, std::string>& settings);

/// Throws ConfigError when keys conflict or values break physical invariants.
void check_config(const RunConfig& config);

}  // namespace pwave
