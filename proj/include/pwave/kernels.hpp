#pragma once

// Data-parallel batch kernels. Each has a serial reference and an OpenMP
// version; both evaluate every element with the same scalar code, so their
// results are bit-identical.

#include <span>
#include <vector>

#include "pwave/kinematics.hpp"
#include "pwave/numerics.hpp"
#include "pwave/pulse.hpp"

namespace pwave::kernels {

/// u_perp and u_z of a pulse at every grid node.
struct PulseSamples {
  std::vector<double> ux;
  std::vector<double> uy;
  std::vector<double> uz;
};
PulseSamples sample_pulse_serial(const PulseSpec& pulse, const Grid& grid);
PulseSamples sample_pulse_parallel(const PulseSpec& pulse, const Grid& grid);

/// Integrals over each grid interval [x_i, x_{i+1}] of u_x, u_y, u_z and
/// (x_{i+1} - xi) u_z, by Gauss-Legendre split at the pulse breakpoints.
struct IntervalIntegrals {
  std::vector<double> ux;
  std::vector<double> uy;
  std::vector<double> uz;
  std::vector<double> uz_moment;
};
IntervalIntegrals interval_integrals_serial(const PulseSpec& pulse, const Grid& grid);
IntervalIntegrals interval_integrals_parallel(const PulseSpec& pulse, const Grid& grid);

/// Trajectory rows for the pairs (x0[i], labels[i]).
std::vector<TrajectorySample> trajectory_batch_serial(const MotionTables& tables,
                                                      std::span<const double> x0,
                                                      std::span<const FluidLabel> labels);
std::vector<TrajectorySample> trajectory_batch_parallel(const MotionTables& tables,
                                                        std::span<const double> x0,
                                                        std::span<const FluidLabel> labels);

/// Node values of the first-order longitudinal quantities for plasma constant k.
struct FirstOrderNodes {
  std::vector<double> r;
  std::vector<double> s;
  std::vector<double> beta_z1;
  std::vector<double> g;
};
FirstOrderNodes first_order_nodes_serial(std::span<const double> u_z, std::span<const double> v3,
                                         double k);
FirstOrderNodes first_order_nodes_parallel(std::span<const double> u_z,
                                           std::span<const double> v3, double k);

/// Integral of g over each grid interval, by Gauss-Legendre on exact u_z and V3.
std::vector<double> g_integrals_serial(const MotionTables& tables, double k);
std::vector<double> g_integrals_parallel(const MotionTables& tables, double k);

/// |u1_perp - u0_perp| / w divided by K lambda xi_- / 2 pi at (xi[i], xi_minus[i]).
std::vector<double> bound_ratios_serial(const MotionTables& tables, double k,
                                        std::span<const double> xi,
                                        std::span<const double> xi_minus);
std::vector<double> bound_ratios_parallel(const MotionTables& tables, double k,
                                          std::span<const double> xi,
                                          std::span<const double> xi_minus);

}  // namespace pwave::kernels
