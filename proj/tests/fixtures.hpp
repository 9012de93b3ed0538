#pragma once

#include <cmath>

#include "pwave/correction.hpp"
#include "pwave/kinematics.hpp"
#include "pwave/slingshot.hpp"

namespace fixture {

inline pwave::LaserSpec flame(double nu = 1.0,
                              pwave::Polarization pol = pwave::Polarization::linear) {
  return {5.0e7, 8.0e-5, 7.5e-4, pol, nu};
}

/// Both matched envelopes of a laser on the common grid [0, l].
struct Matched {
  pwave::LaserSpec laser;
  pwave::MatchedPulse m;
  double length = 0.0;
  double xi0 = 0.0;
  pwave::PulseSpec gauss;
  pwave::PulseSpec poly;
  pwave::Grid grid;

  explicit Matched(const pwave::LaserSpec& l, pwave::PulseMode mode = pwave::PulseMode::averaged,
                   std::size_t intervals = 20000)
      : laser(l),
        m(pwave::match_pulse_parameters(l)),
        length(pwave::ionization_length(m.a_g, m.sigma, 24.0, m.polarization_factor)),
        xi0(0.5 * length),
        gauss(pwave::gaussian_pulse(m, l, length, mode)),
        poly(pwave::polynomial_pulse(m, l, xi0, mode)),
        grid(pwave::Grid::uniform(0.0, length, intervals)) {}
};

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace fixture
