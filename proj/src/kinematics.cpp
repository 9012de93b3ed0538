#include "pwave/kinematics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "pwave/constants.hpp"
#include "pwave/errors.hpp"
#include "pwave/kernels.hpp"

namespace pwave {

namespace {

constexpr double kMinNodesPerWavelength = 16.0;

// theta(0) = 1.
double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

MonotoneTable shifted_identity(const MonotoneTable& base, double scale) {
  const auto v = base.values();
  const auto m = base.table().slopes();
  const auto& grid = base.grid();
  std::vector<double> values(v.size()), slopes(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    values[i] = grid[i] + scale * v[i];
    slopes[i] = 1.0 + scale * m[i];
  }
  return MonotoneTable(grid, std::move(values), std::move(slopes),
                       Monotonicity::strictly_increasing);
}

}  // namespace

Grid make_grid(const PulseSpec& pulse, const GridOptions& options) {
  const double lo = options.xi_min.value_or(0.0);
  const double hi = options.xi_max.value_or(support_end(pulse));
  if (options.intervals < 1) throw InvalidArgument("make_grid: need at least one interval");
  if (!(hi > lo)) throw InvalidArgument("make_grid: empty xi range");
  return Grid::uniform(lo, hi, options.intervals);
}

MotionTables::MotionTables(PulseSpec pulse, std::vector<Vec2> u_perp_nodes,
                           std::vector<double> u_z_nodes, Table y_perp_x, Table y_perp_y,
                           MonotoneTable y3, MonotoneTable v3, Table p_perp_x, Table p_perp_y)
    : pulse_(std::move(pulse)),
      u_perp_nodes_(std::move(u_perp_nodes)),
      u_z_nodes_(std::move(u_z_nodes)),
      y_perp_x_(std::move(y_perp_x)),
      y_perp_y_(std::move(y_perp_y)),
      y3_(std::move(y3)),
      big_xi_(y3_.plus_identity()),
      xi_minus_front_(shifted_identity(y3_, 2.0)),
      v3_(std::move(v3)),
      p_perp_x_(std::move(p_perp_x)),
      p_perp_y_(std::move(p_perp_y)),
      breaks_(breakpoints(pulse_)),
      end_(y3_.grid().back()) {}

Vec2 MotionTables::y_perp(double xi) const {
  if (xi <= grid().front()) return {};
  if (xi >= end_) return {y_perp_x_.back_value(), y_perp_y_.back_value()};
  return {y_perp_x_(xi), y_perp_y_(xi)};
}

double MotionTables::y3(double xi) const {
  if (xi <= grid().front()) return 0.0;
  if (xi >= end_) return y3_.max_value();
  return y3_(xi);
}

double MotionTables::big_xi(double xi) const { return xi + y3(xi); }

double MotionTables::big_xi_inverse(double y) const {
  if (!std::isfinite(y)) throw InvalidArgument("big_xi_inverse: non-finite argument");
  if (y <= big_xi_.min_value()) return y;
  if (y >= big_xi_.max_value()) return y - y3_.max_value();
  return invert_monotone(big_xi_, y);
}

double MotionTables::v3(double xi) const {
  if (xi <= grid().front()) return 0.0;
  if (xi >= end_) return v3_.max_value() + y3_.max_value() * (xi - end_);
  const std::size_t i = grid().interval(xi);
  const double a = grid()[i];
  if (xi == a) return v3_.values()[i];
  const double rest = gauss_legendre5_split(
      [&](double t) { return (xi - t) * longitudinal_momentum_zero(pulse_, t); }, a, xi, breaks_);
  return v3_.values()[i] + (xi - a) * y3_.values()[i] + rest;
}

double MotionTables::xi_minus_along_front(double eta) const { return eta + 2.0 * y3(eta); }

double MotionTables::xi_minus_along_front_inverse(double xi_minus) const {
  if (!std::isfinite(xi_minus)) throw InvalidArgument("xi_minus inverse: non-finite argument");
  if (xi_minus <= xi_minus_front_.min_value()) return xi_minus;
  if (xi_minus >= xi_minus_front_.max_value()) return xi_minus - 2.0 * y3_.max_value();
  return invert_monotone(xi_minus_front_, xi_minus);
}

Vec2 MotionTables::p_perp(double eta) const {
  if (eta <= grid().front()) return {};
  if (eta >= end_) {
    const Vec2 p_end{p_perp_x_.back_value(), p_perp_y_.back_value()};
    return p_end + (eta - end_) * y_perp(end_);
  }
  return {p_perp_x_(eta), p_perp_y_(eta)};
}

MotionTables build_motion_tables(const PulseSpec& pulse, const Grid& grid) {
  validate(pulse);
  if (grid.front() > 0.0) throw InvalidArgument("build_motion_tables: grid must start at xi <= 0");
  if (grid.back() < support_end(pulse)) {
    throw InvalidArgument("build_motion_tables: grid does not cover the pulse support");
  }
  if (pulse.mode == PulseMode::oscillatory) {
    const double nodes_per_wavelength =
        pulse.wavelength * static_cast<double>(grid.size() - 1) / (grid.back() - grid.front());
    if (nodes_per_wavelength < kMinNodesPerWavelength) {
      throw ResolutionError("build_motion_tables: " + std::to_string(nodes_per_wavelength) +
                            " nodes per wavelength, need at least 16");
    }
  }

  auto samples = kernels::sample_pulse_parallel(pulse, grid);
  const auto inc = kernels::interval_integrals_parallel(pulse, grid);
  const std::size_t n = grid.size();

  // Primitives accumulate exact per-interval integrals of the pulse. V3 grows
  // by h Y3(x_i) + int (x_{i+1} - t) u_z dt, a sum of nonnegative terms.
  std::vector<double> yx(n, 0.0), yy(n, 0.0), y3v(n, 0.0), v3v(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    yx[i + 1] = yx[i] + inc.ux[i];
    yy[i + 1] = yy[i] + inc.uy[i];
    y3v[i + 1] = y3v[i] + inc.uz[i];
    v3v[i + 1] = v3v[i] + (grid[i + 1] - grid[i]) * y3v[i] + inc.uz_moment[i];
  }
  std::vector<double> v3_slopes = y3v;
  Table y_x(grid, yx, samples.ux);
  Table y_y(grid, yy, samples.uy);
  MonotoneTable y3(grid, std::move(y3v), samples.uz, Monotonicity::nondecreasing);
  MonotoneTable v3(grid, std::move(v3v), std::move(v3_slopes), Monotonicity::nondecreasing);

  std::vector<double> px(n), py(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double jac = 1.0 + 2.0 * samples.uz[i];
    px[i] = yx[i] * jac;
    py[i] = yy[i] * jac;
  }
  Table p_x = cumulative_integral(px, grid);
  Table p_y = cumulative_integral(py, grid);

  std::vector<Vec2> u_perp(n);
  for (std::size_t i = 0; i < n; ++i) u_perp[i] = {samples.ux[i], samples.uy[i]};

  return MotionTables(pulse, std::move(u_perp), std::move(samples.uz), std::move(y_x),
                      std::move(y_y), std::move(y3), std::move(v3), std::move(p_x), std::move(p_y));
}

MotionTables build_motion_tables(const PulseSpec& pulse, const GridOptions& options) {
  return build_motion_tables(pulse, make_grid(pulse, options));
}

double xi_of(const MotionTables& tables, double x0, double z_label) {
  const double d = x0 - z_label;
  if (d <= 0.0) return d;
  return tables.big_xi_inverse(d);
}

Position trajectory_zero(const MotionTables& tables, double x0, const FluidLabel& label) {
  if (x0 <= label.z) return {label.z, label.perp};
  const double xi = xi_of(tables, x0, label.z);
  return {x0 - xi, label.perp + tables.y_perp(xi)};
}

FluidLabel label_from_position(const MotionTables& tables, double x0, double z, Vec2 perp) {
  const double xi = x0 - z;
  if (xi <= 0.0) return {z, perp};
  return {z - tables.y3(xi), perp - tables.y_perp(xi)};
}

double proper_time(const MotionTables& tables, double x0, double z_label) {
  return xi_of(tables, x0, z_label);
}

double density_zero(const MotionTables& tables, double n0, double x0, double z) {
  const double xi = x0 - z;
  const double z_label = z - tables.y3(xi);
  return n0 * heaviside(z_label) * tables.gamma(xi);
}

Kinematics recover_from_s(Vec2 u_perp, double s) {
  if (!(s > 0.0)) throw InvalidArgument("recover_from_s: s must be positive");
  const double u2 = u_perp.norm2();
  Kinematics k;
  k.gamma = (1.0 + u2 + s * s) / (2.0 * s);
  // 1 - s^2 factored so that s = 1 gives u_z = |u|^2 / 2 to full precision.
  k.u_z = (u2 + (1.0 - s) * (1.0 + s)) / (2.0 * s);
  k.beta_perp = (1.0 / k.gamma) * u_perp;
  k.beta_z = k.u_z / k.gamma;
  return k;
}

Vec2 vector_potential(const PulseSpec& pulse, double xi) {
  const double scale = cgs::electron_rest_energy / cgs::electron_charge;
  const double w = envelope(pulse, xi);
  if (w == 0.0) return {};
  if (pulse.mode == PulseMode::averaged) return {scale * std::sqrt(polarization_factor(pulse)) * w, 0.0};
  return scale * w * phase_vector(pulse, xi);
}

TransverseFields transverse_fields(const PulseSpec& pulse, double x0, double z) {
  const double xi = x0 - z;
  const double w = envelope(pulse, xi);
  if (xi <= 0.0 || (w == 0.0 && envelope_slope(pulse, xi) == 0.0)) return {};
  const double scale = cgs::electron_rest_energy / cgs::electron_charge;
  const double k = wavenumber(pulse);
  Vec2 e;
  if (pulse.mode == PulseMode::averaged) {
    e = {scale * std::sqrt(polarization_factor(pulse)) * k * w, 0.0};
  } else {
    const double dw = envelope_slope(pulse, xi);
    e = -scale * (dw * phase_vector(pulse, xi) + k * w * carrier_vector(pulse, xi));
  }
  return {e, rotate_by_z(e)};
}

double longitudinal_field(double n0, double x0, double z, const MotionTables& tables) {
  const double z_label = label_from_position(tables, x0, z).z;
  return 4.0 * cgs::pi * cgs::electron_charge * n0 *
         (z * heaviside(z) - z_label * heaviside(z_label));
}

TrajectorySample trajectory_sample(const MotionTables& tables, double x0, const FluidLabel& label) {
  const Position pos = trajectory_zero(tables, x0, label);
  const double xi = x0 - pos.z;
  const double uz = tables.u_z(xi);
  return {x0, pos.z, pos.perp, 1.0 + uz, uz};
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> rows) {
  out << "x0_cm,z_cm,xperp1_cm,xperp2_cm,gamma,uz\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g,%.15g\n", r.x0, r.z, r.perp.x,
                  r.perp.y, r.gamma, r.u_z);
    out << buf;
  }
}

}  // namespace pwave
