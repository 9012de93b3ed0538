#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwave/correction.hpp"
#include "pwave/kinematics.hpp"
#include "pwave/pulse.hpp"

namespace pwave {

/// Laser pulse as specified by its user-facing parameters.
struct LaserSpec {
  double energy = 0.0;      // erg
  double wavelength = 0.0;  // cm
  double fwhm = 0.0;        // cm, width at half height l' of the intensity
  Polarization polarization = Polarization::linear;
  double aspect = 1.0;      // nu, spot radius R = nu zeta
};

/// Throws InvalidArgument unless energy >= 0 and the other fields are positive.
void validate(const LaserSpec& laser);
std::vector<std::string> laser_warnings(const LaserSpec& laser);

/// Gaussian and polynomial envelopes with the laser's energy and width.
struct MatchedPulse {
  double zeta = 0.0;       // cm, expected displacement
  double sigma = 0.0;      // cm^2
  double a_g = 0.0;
  double l_p = 0.0;        // cm
  double a_p = 0.0;
  double radius = 0.0;     // cm, R = nu zeta
  double polarization_factor = 0.5;
};

MatchedPulse match_pulse_parameters(const LaserSpec& laser);

/// Gaussian truncated to [0, length], centred at length / 2.
PulseSpec gaussian_pulse(const MatchedPulse& m, const LaserSpec& laser, double length,
                         PulseMode mode = PulseMode::averaged);
/// Polynomial envelope centred at xi0.
PulseSpec polynomial_pulse(const MatchedPulse& m, const LaserSpec& laser, double xi0,
                           PulseMode mode = PulseMode::averaged);

/// EM energy 2 (mc^2 pi R)^2 / (e lambda)^2 Y3(l) of a pulse of radius R (erg).
double pulse_energy(const MotionTables& tables, double radius);
double pulse_energy(const PulseSpec& pulse, double radius, const GridOptions& grid = {});

/// Length of the interval where the Keldysh parameter of a gaussian
/// envelope is <= 1: 2 sqrt(sigma ln(p mc^2 a_g^2 / 2 U_i)).
/// Throws BelowThreshold when the peak does not ionize.
double ionization_length(double a_g, double sigma, double ionization_ev, double p = 0.5);

/// Gamma = sqrt(2 U_i / (mc^2 p w^2)).
double keldysh_parameter(double ionization_ev, double w, double p = 0.5);

struct ExitEnergy {
  double gamma = 1.0;
  double h_mev = 0.0;
};
/// gamma_eM = 1 + 2 K zeta^2, H = mc^2 gamma_eM.
ExitEnergy exit_energy(double k, double zeta);

/// How the turning point xi1 is chosen relative to xi0.
struct TurningPolicy {
  enum class Kind { fraction_of_lp, absolute_cm, fraction_of_fwhm };
  Kind kind = Kind::fraction_of_lp;
  double value = 0.05;

  double offset(const MatchedPulse& m, const LaserSpec& laser) const;
};

struct ScenarioOptions {
  TurningPolicy turning{};
  std::size_t grid_intervals = 20000;
  double ionization_ev = 24.0;
  /// Tabulate with this polarization instead of the laser's (amplitudes
  /// stay matched to the laser).
  std::optional<Polarization> tabulation_polarization;
  /// Skip the density solve and use this n0 (cm^-3) for both envelopes.
  std::optional<double> density_override;
  std::size_t bound_samples = 1000;
  double max_t_threshold = 0.5;
};

/// Results for one of the two matched envelopes.
struct EnvelopeResult {
  double xi1 = 0.0;          // cm
  PlasmaSpec plasma{};
  double k_xi0_sq = 0.0;     // K xi0^2
  double k_fwhm_sq = 0.0;    // K l'^2
  double energy = 0.0;       // erg, from the tables with R
  double y3_peak = 0.0;      // cm, Y3(xi0)
  ValidityDiagnostics validity{};
};

struct SlingshotReport {
  LaserSpec laser{};
  MatchedPulse matched{};
  double ionization_ev = 24.0;
  double tabulation_p = 0.5;
  double length = 0.0;       // cm, ionization length l
  double xi0 = 0.0;          // cm
  double keldysh_peak = 0.0;
  EnvelopeResult gaussian{};
  EnvelopeResult polynomial{};
  ExitEnergy exit{};         // from K of the gaussian and the matched zeta
  bool valid = true;
  std::vector<std::string> warnings;
};

SlingshotReport run_scenario(const LaserSpec& laser, const ScenarioOptions& options = {});

void write_report_text(std::ostream& out, const SlingshotReport& report);
/// One `key = value  # unit` per line.
void write_report_keyvalue(std::ostream& out, const SlingshotReport& report);
/// Reads a key-value report; comments and blank lines are skipped.
std::map<std::string, std::string> read_keyvalue(std::istream& in);

}  // namespace pwave
