#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pwave/kinematics.hpp"
#include "pwave/numerics.hpp"
#include "pwave/pulse.hpp"

namespace pwave {

/// Step electron density n0 theta(Z) over immobile ions.
struct PlasmaSpec {
  double n0 = 0.0;  // cm^-3
  double k = 0.0;   // cm^-2, pi r_e n0

  static PlasmaSpec from_density(double n0);
  static PlasmaSpec from_k(double k);
};

/// First Picard correction for a step-density plasma, on the grid of the
/// motion tables it was built from.
class FirstOrderTables {
 public:
  double k() const { return k_; }
  const Grid& grid() const { return big_g_.grid(); }

  /// Node samples.
  std::span<const double> r_nodes() const { return r_; }
  std::span<const double> s_nodes() const { return s_; }
  std::span<const double> beta_z1_nodes() const { return beta_z1_; }
  std::span<const double> g_nodes() const { return g_; }
  std::span<const double> big_g_nodes() const { return big_g_.values(); }
  std::span<const double> t_nodes() const { return t_; }

  /// G = int_0^xi g (cm); zero below the grid, OutOfRange above it.
  double big_g(double xi) const;
  /// T = G / Y3, zero where Y3 < 1e-30 cm.
  double t(double xi) const;

  /// First zero of beta_z1 inside the grid, if any.
  std::optional<double> turning_point() const { return turning_point_; }

 private:
  friend FirstOrderTables build_first_order(const MotionTables& tables, const PlasmaSpec& plasma);
  FirstOrderTables(double k, std::vector<double> r, std::vector<double> s,
                   std::vector<double> beta_z1, std::vector<double> g, MonotoneTable big_g,
                   std::vector<double> t, const MotionTables& tables);

  double k_;
  std::vector<double> r_;
  std::vector<double> s_;
  std::vector<double> beta_z1_;
  std::vector<double> g_;
  MonotoneTable big_g_;
  std::vector<double> t_;
  Table y3_;
  std::optional<double> turning_point_;
};

/// Values of r = 4 K V3 and the derived first-order quantities at a phase.
struct FirstOrderPoint {
  double r = 0.0;
  double s = 1.0;
  double beta_z0 = 0.0;
  double beta_z1 = 0.0;
  double g = 0.0;
};
/// Closed formulae at given u_z(0) and V3; stable for large r.
FirstOrderPoint first_order_point(double u_z, double v3, double k);
FirstOrderPoint first_order_at(const MotionTables& tables, double k, double xi);

/// Throws InvalidArgument for K < 0.
FirstOrderTables build_first_order(const MotionTables& tables, const PlasmaSpec& plasma);

/// T(Xi^-1(x0 - Z)): relative difference of zero- and first-order displacement.
double relative_displacement_error(const FirstOrderTables& fo, const MotionTables& tables,
                                   double x0, double z_label);

/// Smallest xi > 0 with beta_z1(xi) = 0, i.e. 1 + 2 u_z(xi) = exp(8 K V3(xi)).
/// Throws NoTurningPoint when beta_z1 keeps its sign over the grid.
double first_turning_point(const FirstOrderTables& fo, const MotionTables& tables);

/// K = ln(1 + 2 u_z(xi1)) / (8 V3(xi1)): the density whose first turning
/// point is xi1. Polarization enters through the tables' u_z.
PlasmaSpec solve_density_for_turning(const MotionTables& tables, double xi1);

/// min{xi, eta}, with eta the phase at which the Z = 0 zero-order
/// trajectory crosses x0 + z = xi_minus_prime.
double xi_hat(const MotionTables& tables, double xi, double xi_minus_prime);

struct TransverseCorrection {
  Vec2 w_perp{};   // cm^2
  Vec2 u_perp0{};
  Vec2 u_perp1{};  // u_perp0 - 2 K W_perp
};

/// W_perp(xi, xi_-) = 1/2 int_0^{xi_-} Y_perp(xi_hat(xi, s)) ds, evaluated
/// exactly through the substitution s = eta + 2 Y3(eta).
Vec2 w_perp(const MotionTables& tables, double xi, double xi_minus);
TransverseCorrection transverse_correction(const MotionTables& tables, const PlasmaSpec& plasma,
                                           double xi, double xi_minus);

/// Left side over right side of |u1 - u0| / w <= K lambda xi_- / 2 pi.
/// Zero where K, w or xi_- vanish.
double bound_ratio(const MotionTables& tables, double k, double xi, double xi_minus);

struct ValidityDiagnostics {
  double xi0 = 0.0;
  double t_at_peak = 0.0;
  double max_t = 0.0;                 // on [0, xi0]
  double condition_ratio = 0.0;       // (2 Y3(xi0) + xi0 + 2 Z) K lambda / 2 pi
  bool condition_pass = true;         // condition_ratio <= 0.1
  double max_bound_ratio = 0.0;
  std::size_t bound_samples = 0;
  bool bound_pass = true;             // max_bound_ratio <= 1
};

inline constexpr double kConditionThreshold = 0.1;

/// The bound is sampled on a deterministic lattice of bound_samples points
/// with xi in (0, xi0] and xi_- in (0, 2 Y3(xi0) + xi0 + 2 Z]. Averaged
/// tables get an oscillatory companion for the bound.
ValidityDiagnostics validity_check(const FirstOrderTables& fo, const MotionTables& tables,
                                   const PlasmaSpec& plasma, const PulseSpec& pulse,
                                   double z_label = 0.0, std::size_t bound_samples = 1000);

/// Header `xi_cm,w,uz0,Y3_cm,V3_cm2,betaz0,betaz1,g,T`, one row per
/// `stride`-th node; 15 significant digits.
void write_curves_csv(std::ostream& out, const MotionTables& tables, const FirstOrderTables& fo,
                      std::size_t stride = 1);

}  // namespace pwave
