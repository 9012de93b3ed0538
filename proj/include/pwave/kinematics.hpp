#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pwave/numerics.hpp"
#include "pwave/pulse.hpp"
#include "pwave/vec2.hpp"

namespace pwave {

/// Lagrangian label of a fluid element: initial position.
struct FluidLabel {
  double z = 0.0;      // cm, Z
  Vec2 perp{};         // cm, X_perp
};

/// Event in the (x0, z) plane; x0 = c t.
struct WorldPoint {
  double x0 = 0.0;  // cm
  double z = 0.0;   // cm
  double xi() const { return x0 - z; }
  double xi_minus() const { return x0 + z; }
};

struct GridOptions {
  std::size_t intervals = 20000;
  /// Grid limits; default [0, end of pulse support].
  std::optional<double> xi_min;
  std::optional<double> xi_max;
};

/// Uniform grid over the pulse support with `intervals` steps.
Grid make_grid(const PulseSpec& pulse, const GridOptions& options = {});

/// Zero-density primitives of a pulse tabulated on a grid.
///
/// Below the grid (xi <= 0) and past the pulse support the pulse vanishes,
/// so every primitive is continued exactly there; queries are total for
/// finite arguments.
class MotionTables {
 public:
  const PulseSpec& pulse() const { return pulse_; }
  const Grid& grid() const { return y3_.grid(); }

  /// Exact pulse quantities (not interpolated).
  Vec2 u_perp(double xi) const { return transverse_momentum_zero(pulse_, xi); }
  double u_z(double xi) const { return longitudinal_momentum_zero(pulse_, xi); }
  double gamma(double xi) const { return 1.0 + u_z(xi); }

  /// Y_perp = int_0^xi u_perp (cm).
  Vec2 y_perp(double xi) const;
  /// Y3 = int_0^xi u_z (cm).
  double y3(double xi) const;
  /// Xi = xi + Y3 (cm).
  double big_xi(double xi) const;
  /// Inverse of Xi.
  double big_xi_inverse(double y) const;
  /// V3 = int_0^xi Y3 (cm^2). Between nodes the remainder integral is
  /// evaluated on the pulse, so V3 is exact wherever u_z is polynomial.
  double v3(double xi) const;
  /// eta + 2 Y3(eta): the value of x0 + z along the Z = 0 trajectory at phase eta.
  double xi_minus_along_front(double eta) const;
  double xi_minus_along_front_inverse(double xi_minus) const;
  /// P_perp = int_0^eta Y_perp (1 + 2 u_z) (cm^2).
  Vec2 p_perp(double eta) const;

  const MonotoneTable& y3_table() const { return y3_; }
  const MonotoneTable& big_xi_table() const { return big_xi_; }
  const MonotoneTable& v3_table() const { return v3_; }
  const Table& y_perp_x_table() const { return y_perp_x_; }
  const Table& y_perp_y_table() const { return y_perp_y_; }

  /// Node samples of u_perp and u_z.
  std::span<const Vec2> u_perp_nodes() const { return u_perp_nodes_; }
  std::span<const double> u_z_nodes() const { return u_z_nodes_; }

 private:
  friend MotionTables build_motion_tables(const PulseSpec& pulse, const Grid& grid);
  MotionTables(PulseSpec pulse, std::vector<Vec2> u_perp_nodes, std::vector<double> u_z_nodes,
               Table y_perp_x, Table y_perp_y, MonotoneTable y3, MonotoneTable v3,
               Table p_perp_x, Table p_perp_y);

  PulseSpec pulse_;
  std::vector<Vec2> u_perp_nodes_;
  std::vector<double> u_z_nodes_;
  Table y_perp_x_;
  Table y_perp_y_;
  MonotoneTable y3_;
  MonotoneTable big_xi_;
  MonotoneTable xi_minus_front_;
  MonotoneTable v3_;
  Table p_perp_x_;
  Table p_perp_y_;
  std::vector<double> breaks_;
  double end_ = 0.0;
};

/// Tabulates all primitives by cumulative quadrature.
///
/// Throws InvalidArgument unless grid.front() <= 0 and grid.back() covers
/// the pulse support, and ResolutionError in oscillatory mode when the grid
/// has fewer than 16 nodes per wavelength.
MotionTables build_motion_tables(const PulseSpec& pulse, const Grid& grid);
MotionTables build_motion_tables(const PulseSpec& pulse, const GridOptions& options = {});

/// Phase Xi^-1(x0 - Z) seen by the element labelled Z at time x0.
double xi_of(const MotionTables& tables, double x0, double z_label);

/// Position (z, x_perp) at time x0 of the element with the given label.
struct Position {
  double z = 0.0;
  Vec2 perp{};
};
Position trajectory_zero(const MotionTables& tables, double x0, const FluidLabel& label);

/// Label of the element found at (x0, z, x_perp).
FluidLabel label_from_position(const MotionTables& tables, double x0, double z, Vec2 perp = {});

/// c times the proper time elapsed since the pulse reached element Z.
double proper_time(const MotionTables& tables, double x0, double z_label);

/// Electron density for a step initial profile n0 theta(Z), in cm^-3.
double density_zero(const MotionTables& tables, double n0, double x0, double z);

/// gamma, u_z and velocities from u_perp and s = gamma - u_z.
struct Kinematics {
  double gamma = 1.0;
  double u_z = 0.0;
  Vec2 beta_perp{};
  double beta_z = 0.0;
};
Kinematics recover_from_s(Vec2 u_perp, double s);

/// Free-wave vector potential alpha_perp(xi) = (mc^2/e) w eps_p (statvolt).
/// Averaged mode: magnitude (mc^2/e) sqrt(p) w along x.
Vec2 vector_potential(const PulseSpec& pulse, double xi);

struct TransverseFields {
  Vec2 e{};  // statvolt/cm
  Vec2 b{};  // gauss
};
/// E_perp = -d alpha_perp / dxi at xi = x0 - z, B = z-hat x E_perp.
TransverseFields transverse_fields(const PulseSpec& pulse, double x0, double z);

/// Longitudinal field of the charge separation for a step plasma n0 theta(Z)
/// with immobile ions (statvolt/cm).
double longitudinal_field(double n0, double x0, double z, const MotionTables& tables);

/// One row of a sampled trajectory.
struct TrajectorySample {
  double x0 = 0.0;
  double z = 0.0;
  Vec2 perp{};
  double gamma = 1.0;
  double u_z = 0.0;
};

TrajectorySample trajectory_sample(const MotionTables& tables, double x0, const FluidLabel& label);

/// Header `x0_cm,z_cm,xperp1_cm,xperp2_cm,gamma,uz`; 15 significant digits.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> rows);

}  // namespace pwave
