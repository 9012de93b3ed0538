#pragma once

#include <numbers>

// Gaussian (CGS) units throughout: lengths and times (as c*t) in cm.
namespace pwave::cgs {

inline constexpr double pi = std::numbers::pi;

inline constexpr double electron_charge = 4.8032047e-10;              // statC
inline constexpr double electron_rest_energy = 8.18710e-7;            // erg, m_e c^2
inline constexpr double electron_rest_energy_mev = 0.5109989;         // MeV
inline constexpr double classical_electron_radius = 2.8179403e-13;    // cm, e^2 / m_e c^2
inline constexpr double erg_per_mev = 1.602177e-6;
inline constexpr double erg_per_ev = 1.602177e-12;

inline constexpr double electron_rest_energy_ev = electron_rest_energy_mev * 1.0e6;

// First and second helium ionization potentials.
inline constexpr double helium_first_ionization_ev = 24.0;
inline constexpr double helium_second_ionization_ev = 54.0;

}  // namespace pwave::cgs
