#include "pwave/slingshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "pwave/constants.hpp"
#include "pwave/errors.hpp"

namespace pwave {

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

EnvelopeResult analyse(const PulseSpec& pulse, const SlingshotReport& r, const Grid& grid,
                       const ScenarioOptions& options, double offset) {
  EnvelopeResult out;
  const MotionTables tables = build_motion_tables(pulse, grid);
  out.xi1 = r.xi0 + offset;
  out.plasma = options.density_override ? PlasmaSpec::from_density(*options.density_override)
                                        : solve_density_for_turning(tables, out.xi1);
  out.k_xi0_sq = out.plasma.k * r.xi0 * r.xi0;
  out.k_fwhm_sq = out.plasma.k * r.laser.fwhm * r.laser.fwhm;
  out.energy = pulse_energy(tables, r.matched.radius);
  out.y3_peak = tables.y3(r.xi0);
  const FirstOrderTables fo = build_first_order(tables, out.plasma);
  out.validity = validity_check(fo, tables, out.plasma, pulse, 0.0, options.bound_samples);
  return out;
}

}  // namespace

void validate(const LaserSpec& laser) {
  if (!(laser.energy >= 0.0) || !std::isfinite(laser.energy)) {
    throw InvalidArgument("laser: energy must be >= 0");
  }
  if (!(laser.wavelength > 0.0)) throw InvalidArgument("laser: wavelength must be positive");
  if (!(laser.fwhm > 0.0)) throw InvalidArgument("laser: width l' must be positive");
  if (!(laser.aspect > 0.0)) throw InvalidArgument("laser: aspect nu must be positive");
}

std::vector<std::string> laser_warnings(const LaserSpec& laser) {
  std::vector<std::string> out;
  if (laser.aspect < 1.0) out.push_back("aspect nu < 1: spot radius below the displacement");
  return out;
}

MatchedPulse match_pulse_parameters(const LaserSpec& laser) {
  validate(laser);
  MatchedPulse m;
  const double p = polarization_factor(laser.polarization);
  const double mc2 = cgs::electron_rest_energy;
  const double el = cgs::electron_charge * laser.wavelength;
  const double nu_pi_mc2 = laser.aspect * cgs::pi * mc2;
  m.polarization_factor = p;
  m.zeta = std::cbrt(laser.energy * el * el / (4.0 * nu_pi_mc2 * nu_pi_mc2));
  m.sigma = laser.fwhm * laser.fwhm / (4.0 * std::log(2.0));
  m.a_g = std::sqrt(8.0 * std::sqrt(std::log(2.0)) / (p * std::sqrt(cgs::pi) * laser.fwhm) * m.zeta);
  m.l_p = 2.5 * laser.fwhm;
  m.a_p = std::sqrt(1008.0 / (p * laser.fwhm) * m.zeta);
  m.radius = laser.aspect * m.zeta;
  return m;
}

PulseSpec gaussian_pulse(const MatchedPulse& m, const LaserSpec& laser, double length,
                         PulseMode mode) {
  PulseSpec p;
  p.polarization = laser.polarization;
  p.wavelength = laser.wavelength;
  p.mode = mode;
  p.envelope = GaussianEnvelope{m.a_g, m.sigma, 0.5 * length, length};
  return p;
}

PulseSpec polynomial_pulse(const MatchedPulse& m, const LaserSpec& laser, double xi0,
                           PulseMode mode) {
  PulseSpec p;
  p.polarization = laser.polarization;
  p.wavelength = laser.wavelength;
  p.mode = mode;
  p.envelope = PolynomialEnvelope{m.a_p, m.l_p, xi0};
  return p;
}

double pulse_energy(const MotionTables& tables, double radius) {
  const double mc2_pi_r = cgs::electron_rest_energy * cgs::pi * radius;
  const double el = cgs::electron_charge * tables.pulse().wavelength;
  return 2.0 * mc2_pi_r * mc2_pi_r / (el * el) * tables.y3(support_end(tables.pulse()));
}

double pulse_energy(const PulseSpec& pulse, double radius, const GridOptions& grid) {
  return pulse_energy(build_motion_tables(pulse, grid), radius);
}

double ionization_length(double a_g, double sigma, double ionization_ev, double p) {
  if (!(a_g >= 0.0) || !(sigma > 0.0) || !(ionization_ev > 0.0) || !(p > 0.0)) {
    throw InvalidArgument("ionization_length: a_g must be >= 0, other arguments positive");
  }
  const double x = p * cgs::electron_rest_energy_ev * a_g * a_g / (2.0 * ionization_ev);
  if (!(x > 1.0)) {
    throw BelowThreshold("ionization_length: peak intensity below the ionization threshold");
  }
  return 2.0 * std::sqrt(sigma * std::log(x));
}

double keldysh_parameter(double ionization_ev, double w, double p) {
  if (!(w > 0.0)) return INFINITY;
  return std::sqrt(2.0 * ionization_ev / (cgs::electron_rest_energy_ev * p * w * w));
}

ExitEnergy exit_energy(double k, double zeta) {
  if (!(k >= 0.0) || !(zeta >= 0.0)) throw InvalidArgument("exit_energy: K and zeta must be >= 0");
  ExitEnergy e;
  e.gamma = 1.0 + 2.0 * k * zeta * zeta;
  e.h_mev = cgs::electron_rest_energy_mev * e.gamma;
  return e;
}

double TurningPolicy::offset(const MatchedPulse& m, const LaserSpec& laser) const {
  switch (kind) {
    case Kind::fraction_of_lp:
      return value * m.l_p;
    case Kind::absolute_cm:
      return value;
    case Kind::fraction_of_fwhm:
      return value * laser.fwhm;
  }
  return value;
}

SlingshotReport run_scenario(const LaserSpec& laser, const ScenarioOptions& options) {
  SlingshotReport r;
  r.laser = laser;
  r.matched = match_pulse_parameters(laser);
  r.warnings = laser_warnings(laser);
  r.ionization_ev = options.ionization_ev;
  r.length = ionization_length(r.matched.a_g, r.matched.sigma, options.ionization_ev,
                               r.matched.polarization_factor);
  r.xi0 = 0.5 * r.length;
  r.keldysh_peak = keldysh_parameter(options.ionization_ev, r.matched.a_g,
                                     r.matched.polarization_factor);

  LaserSpec tab = laser;
  if (options.tabulation_polarization) tab.polarization = *options.tabulation_polarization;
  r.tabulation_p = polarization_factor(tab.polarization);

  const PulseSpec gauss = gaussian_pulse(r.matched, tab, r.length);
  const PulseSpec poly = polynomial_pulse(r.matched, tab, r.xi0);
  for (const auto& w : pulse_warnings(gauss)) r.warnings.push_back("gaussian: " + w);
  for (const auto& w : pulse_warnings(poly)) r.warnings.push_back("polynomial: " + w);

  const double end = std::max(support_end(gauss), support_end(poly));
  const Grid grid = Grid::uniform(0.0, end, options.grid_intervals);
  const double offset = options.turning.offset(r.matched, laser);
  r.gaussian = analyse(gauss, r, grid, options, offset);
  r.polynomial = analyse(poly, r, grid, options, offset);
  r.exit = exit_energy(r.gaussian.plasma.k, r.matched.zeta);

  for (const EnvelopeResult* e : {&r.gaussian, &r.polynomial}) {
    if (!e->validity.condition_pass || e->validity.max_t > options.max_t_threshold) r.valid = false;
  }
  return r;
}

void write_report_text(std::ostream& out, const SlingshotReport& r) {
  auto line = [&](const char* label, double v, const char* unit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-34s %.6g %s\n", label, v, unit);
    out << buf;
  };
  out << "Slingshot scenario\n";
  out << "laser\n";
  line("energy", r.laser.energy, "erg");
  line("wavelength", r.laser.wavelength, "cm");
  line("width at half height l'", r.laser.fwhm, "cm");
  line("aspect nu", r.laser.aspect, "");
  line("polarization factor p", r.matched.polarization_factor, "");
  out << "matched envelopes\n";
  line("displacement zeta", r.matched.zeta, "cm");
  line("spot radius R", r.matched.radius, "cm");
  line("gaussian sigma", r.matched.sigma, "cm^2");
  line("gaussian a_g", r.matched.a_g, "");
  line("polynomial l_p", r.matched.l_p, "cm");
  line("polynomial a_p", r.matched.a_p, "");
  out << "ionization\n";
  line("potential U_i", r.ionization_ev, "eV");
  line("length l", r.length, "cm");
  line("peak position xi0", r.xi0, "cm");
  line("Keldysh parameter at xi0", r.keldysh_peak, "");
  line("tabulation p", r.tabulation_p, "");
  for (const auto& [name, e] : {std::pair{"gaussian", &r.gaussian}, std::pair{"polynomial", &r.polynomial}}) {
    out << name << " envelope\n";
    line("turning point xi1", e->xi1, "cm");
    line("K", e->plasma.k, "cm^-2");
    line("K xi0^2", e->k_xi0_sq, "");
    line("K l'^2", e->k_fwhm_sq, "");
    line("density n0", e->plasma.n0, "cm^-3");
    line("Y3(xi0)", e->y3_peak, "cm");
    line("pulse energy", e->energy, "erg");
    line("T(xi0)", e->validity.t_at_peak, "");
    line("max T on [0, xi0]", e->validity.max_t, "");
    line("condition ratio", e->validity.condition_ratio, "");
    line("max bound ratio", e->validity.max_bound_ratio, "");
  }
  out << "exit\n";
  line("gamma_eM", r.exit.gamma, "");
  line("energy H", r.exit.h_mev, "MeV");
  out << "status: " << (r.valid ? "valid" : "INVALID") << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
}

void write_report_keyvalue(std::ostream& out, const SlingshotReport& r) {
  auto kv = [&](const std::string& key, double v, const char* unit) {
    out << key << " = " << format("%.15g", v);
    if (unit[0] != '\0') out << "  # " << unit;
    out << "\n";
  };
  kv("laser.energy", r.laser.energy, "erg");
  kv("laser.wavelength", r.laser.wavelength, "cm");
  kv("laser.fwhm", r.laser.fwhm, "cm");
  kv("laser.aspect", r.laser.aspect, "");
  kv("matched.p", r.matched.polarization_factor, "");
  kv("matched.zeta", r.matched.zeta, "cm");
  kv("matched.radius", r.matched.radius, "cm");
  kv("matched.sigma", r.matched.sigma, "cm^2");
  kv("matched.a_g", r.matched.a_g, "");
  kv("matched.l_p", r.matched.l_p, "cm");
  kv("matched.a_p", r.matched.a_p, "");
  kv("ionization.potential", r.ionization_ev, "eV");
  kv("ionization.length", r.length, "cm");
  kv("ionization.xi0", r.xi0, "cm");
  kv("ionization.keldysh_peak", r.keldysh_peak, "");
  kv("tabulation.p", r.tabulation_p, "");
  for (const auto& [name, e] : {std::pair{"gaussian", &r.gaussian}, std::pair{"polynomial", &r.polynomial}}) {
    const std::string p = name;
    kv(p + ".xi1", e->xi1, "cm");
    kv(p + ".K", e->plasma.k, "cm^-2");
    kv(p + ".K_xi0_sq", e->k_xi0_sq, "");
    kv(p + ".K_fwhm_sq", e->k_fwhm_sq, "");
    kv(p + ".n0", e->plasma.n0, "cm^-3");
    kv(p + ".Y3_xi0", e->y3_peak, "cm");
    kv(p + ".energy", e->energy, "erg");
    kv(p + ".T_xi0", e->validity.t_at_peak, "");
    kv(p + ".max_T", e->validity.max_t, "");
    kv(p + ".condition_ratio", e->validity.condition_ratio, "");
    kv(p + ".max_bound_ratio", e->validity.max_bound_ratio, "");
  }
  kv("exit.gamma", r.exit.gamma, "");
  kv("exit.H", r.exit.h_mev, "MeV");
  out << "valid = " << (r.valid ? "true" : "false") << "\n";
}

std::map<std::string, std::string> read_keyvalue(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

}  // namespace pwave
