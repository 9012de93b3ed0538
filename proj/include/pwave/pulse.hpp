#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "pwave/vec2.hpp"

namespace pwave {

enum class Polarization { linear, circular };

/// Period-averaging factor p of |eps_p|^2: 1 for circular, 1/2 for linear.
double polarization_factor(Polarization pol);

enum class PulseMode {
  oscillatory,  ///< exact carrier, u_perp = w eps_p
  averaged,     ///< carrier averaged over a period, |u_perp| = sqrt(p) w
};

/// a exp(-(xi - center)^2 / 2 variance) on [0, length], zero elsewhere.
struct GaussianEnvelope {
  double amplitude = 0.0;
  double variance = 0.0;  // cm^2
  double center = 0.0;    // cm
  double length = 0.0;    // cm
};

/// a [1/4 - ((xi - center) / width)^2]^2 on [center - width/2, center + width/2].
struct PolynomialEnvelope {
  double amplitude = 0.0;
  double width = 0.0;   // cm, support length l_p
  double center = 0.0;  // cm
};

/// Envelope given by samples, linearly interpolated, zero outside.
class SampledEnvelope {
 public:
  SampledEnvelope(std::vector<double> xi, std::vector<double> w);

  /// Two columns with header `xi_cm,w`.
  static SampledEnvelope read_csv(std::istream& in);
  static SampledEnvelope read_csv(const std::filesystem::path& path);

  double operator()(double xi) const;
  double slope(double xi) const;
  const std::vector<double>& xi() const { return xi_; }
  const std::vector<double>& w() const { return w_; }

 private:
  std::vector<double> xi_;
  std::vector<double> w_;
};

using Envelope = std::variant<GaussianEnvelope, PolynomialEnvelope, SampledEnvelope>;

/// Transverse plane-wave pulse travelling in +z, a function of xi = x0 - z.
struct PulseSpec {
  Polarization polarization = Polarization::linear;
  Envelope envelope = PolynomialEnvelope{};
  double wavelength = 0.0;  // cm
  PulseMode mode = PulseMode::averaged;
};

/// Throws InvalidArgument when the pulse breaks a hard invariant.
void validate(const PulseSpec& pulse);
/// Soft problems, e.g. a wavelength comparable to the pulse length.
std::vector<std::string> pulse_warnings(const PulseSpec& pulse);

double wavenumber(const PulseSpec& pulse);
double polarization_factor(const PulseSpec& pulse);

/// Start and end of the envelope support; w vanishes outside.
double support_begin(const PulseSpec& pulse);
double support_end(const PulseSpec& pulse);
/// Sorted points where the envelope or its derivatives may jump.
std::vector<double> breakpoints(const PulseSpec& pulse);
/// First maximum of the envelope (xi_0).
double peak_position(const PulseSpec& pulse);

/// Dimensionless envelope w(xi); zero for xi <= 0.
double envelope(const PulseSpec& pulse, double xi);
double envelope_slope(const PulseSpec& pulse, double xi);

/// eps_p (phase vector of u_perp) and eps_o = eps_p' / k.
Vec2 phase_vector(const PulseSpec& pulse, double xi);
Vec2 carrier_vector(const PulseSpec& pulse, double xi);

/// Zero-density transverse momentum u_perp(0)(xi), in units of m c.
Vec2 transverse_momentum_zero(const PulseSpec& pulse, double xi);
/// u_z(0) = |u_perp(0)|^2 / 2.
double longitudinal_momentum_zero(const PulseSpec& pulse, double xi);
/// gamma(0) = 1 + u_z(0).
double lorentz_factor_zero(const PulseSpec& pulse, double xi);

struct ClosedPrimitives {
  double y3 = 0.0;  // cm
  double v3 = 0.0;  // cm^2
};

/// Closed-form Y3 and V3 of an averaged polynomial pulse. Y3 is constant
/// past the support and V3 continues as its exact primitive there.
ClosedPrimitives polynomial_primitives_closed(const PulseSpec& pulse, double xi);

/// Width at half height of w^2, found by root finding on both flanks.
double intensity_fwhm(const PulseSpec& pulse);

/// int w^2 over the support, by composite Gauss-Legendre quadrature.
double envelope_square_integral(const PulseSpec& pulse);

}  // namespace pwave
