#include "pwave/correction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pwave/constants.hpp"
#include "pwave/errors.hpp"
#include "pwave/kernels.hpp"

namespace pwave {

namespace {

constexpr double kTinyY3 = 1e-30;  // cm

double guarded_ratio(double big_g, double y3) { return y3 < kTinyY3 ? 0.0 : big_g / y3; }

// ln(1 + 2 u_z) - 8 K V3: positive while beta_z1 > 0.
double turning_function(const MotionTables& tables, double k, double xi) {
  return std::log1p(2.0 * tables.u_z(xi)) - 8.0 * k * tables.v3(xi);
}

// R2 low-discrepancy sequence in the unit square.
constexpr double kR2a = 0.7548776662466927;
constexpr double kR2b = 0.5698402909980532;

double frac(double x) { return x - std::floor(x); }

}  // namespace

PlasmaSpec PlasmaSpec::from_density(double n0) {
  if (!(n0 >= 0.0) || !std::isfinite(n0)) throw InvalidArgument("plasma: n0 must be >= 0");
  return {n0, cgs::pi * cgs::classical_electron_radius * n0};
}

PlasmaSpec PlasmaSpec::from_k(double k) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("plasma: K must be >= 0");
  return {k / (cgs::pi * cgs::classical_electron_radius), k};
}

FirstOrderPoint first_order_point(double u_z, double v3, double k) {
  FirstOrderPoint p;
  p.r = 4.0 * k * v3;
  p.s = std::exp(p.r);
  const double a = 1.0 + 2.0 * u_z;
  const double decay = std::exp(-2.0 * p.r);
  const double decay_m1 = std::expm1(-2.0 * p.r);
  p.beta_z0 = u_z / (1.0 + u_z);
  p.beta_z1 = (2.0 * u_z * decay + decay_m1) / (a * decay + 1.0);
  p.g = -a * decay_m1 / (a * decay + 1.0);
  return p;
}

FirstOrderPoint first_order_at(const MotionTables& tables, double k, double xi) {
  return first_order_point(tables.u_z(xi), tables.v3(xi), k);
}

FirstOrderTables::FirstOrderTables(double k, std::vector<double> r, std::vector<double> s,
                                   std::vector<double> beta_z1, std::vector<double> g,
                                   MonotoneTable big_g, std::vector<double> t,
                                   const MotionTables& tables)
    : k_(k),
      r_(std::move(r)),
      s_(std::move(s)),
      beta_z1_(std::move(beta_z1)),
      g_(std::move(g)),
      big_g_(std::move(big_g)),
      t_(std::move(t)),
      y3_(tables.y3_table().table()) {}

double FirstOrderTables::big_g(double xi) const {
  if (xi <= grid().front()) return 0.0;
  return big_g_(xi);
}

double FirstOrderTables::t(double xi) const {
  if (xi <= grid().front()) return 0.0;
  return guarded_ratio(big_g_(xi), y3_(xi));
}

FirstOrderTables build_first_order(const MotionTables& tables, const PlasmaSpec& plasma) {
  if (!(plasma.k >= 0.0)) throw InvalidArgument("build_first_order: K must be >= 0");
  const Grid& grid = tables.grid();
  auto nodes = kernels::first_order_nodes_parallel(tables.u_z_nodes(), tables.v3_table().values(),
                                                   plasma.k);
  const auto dg = kernels::g_integrals_parallel(tables, plasma.k);
  std::vector<double> gsum(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < gsum.size(); ++i) gsum[i + 1] = gsum[i] + dg[i];
  MonotoneTable big_g(grid, std::move(gsum), nodes.g, Monotonicity::nondecreasing);
  const auto gv = big_g.values();
  const auto y3 = tables.y3_table().values();
  std::vector<double> t(grid.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = guarded_ratio(gv[i], y3[i]);

  FirstOrderTables fo(plasma.k, std::move(nodes.r), std::move(nodes.s), std::move(nodes.beta_z1),
                      std::move(nodes.g), std::move(big_g), std::move(t), tables);
  if (plasma.k > 0.0) {
    try {
      fo.turning_point_ = first_turning_point(fo, tables);
    } catch (const NoTurningPoint&) {
    }
  }
  return fo;
}

double relative_displacement_error(const FirstOrderTables& fo, const MotionTables& tables,
                                   double x0, double z_label) {
  const double xi = xi_of(tables, x0, z_label);
  if (xi <= 0.0) return 0.0;
  return fo.t(xi);
}

double first_turning_point(const FirstOrderTables& fo, const MotionTables& tables) {
  const double k = fo.k();
  if (!(k > 0.0)) throw NoTurningPoint("first_turning_point: K = 0, beta_z1 >= 0 everywhere");
  const Grid& grid = fo.grid();
  const auto v3 = tables.v3_table().values();
  const auto uz = tables.u_z_nodes();
  // First node where beta_z1 <= 0 after V3 became positive.
  std::size_t i = 0;
  while (i < grid.size() && !(grid[i] > 0.0 && v3[i] > 0.0)) ++i;
  for (; i < grid.size(); ++i) {
    if (std::log1p(2.0 * uz[i]) - 8.0 * k * v3[i] <= 0.0) break;
  }
  if (i == grid.size()) {
    throw NoTurningPoint("first_turning_point: beta_z1 does not change sign on the grid");
  }
  const double hi = grid[i];
  const double lo = i > 0 ? grid[i - 1] : grid[i];
  if (turning_function(tables, k, lo) <= 0.0) return lo;
  return find_root_monotone([&](double xi) { return -turning_function(tables, k, xi); }, lo, hi);
}

PlasmaSpec solve_density_for_turning(const MotionTables& tables, double xi1) {
  if (!(xi1 > 0.0) || !std::isfinite(xi1)) {
    throw InvalidArgument("solve_density_for_turning: xi1 must be positive");
  }
  const double v3 = tables.v3(xi1);
  if (!(v3 > 0.0)) throw InvalidArgument("solve_density_for_turning: V3(xi1) = 0");
  const double uz = tables.u_z(xi1);
  if (!(uz > 0.0)) throw InvalidArgument("solve_density_for_turning: u_z(xi1) = 0, pulse absent");
  return PlasmaSpec::from_k(std::log1p(2.0 * uz) / (8.0 * v3));
}

double xi_hat(const MotionTables& tables, double xi, double xi_minus_prime) {
  if (!(xi_minus_prime >= 0.0)) throw InvalidArgument("xi_hat: xi_minus must be >= 0");
  return std::min(xi, tables.xi_minus_along_front_inverse(xi_minus_prime));
}

Vec2 w_perp(const MotionTables& tables, double xi, double xi_minus) {
  if (!(xi_minus >= 0.0)) throw InvalidArgument("w_perp: point outside the causal region");
  if (xi <= 0.0) return {};
  const double crossing = tables.xi_minus_along_front(xi);
  const double eta = std::min(tables.xi_minus_along_front_inverse(xi_minus), xi);
  Vec2 w = tables.p_perp(eta);
  if (xi_minus > crossing) w += (xi_minus - crossing) * tables.y_perp(xi);
  return 0.5 * w;
}

TransverseCorrection transverse_correction(const MotionTables& tables, const PlasmaSpec& plasma,
                                           double xi, double xi_minus) {
  TransverseCorrection c;
  c.w_perp = w_perp(tables, xi, xi_minus);
  c.u_perp0 = tables.u_perp(xi);
  c.u_perp1 = c.u_perp0 - 2.0 * plasma.k * c.w_perp;
  return c;
}

double bound_ratio(const MotionTables& tables, double k, double xi, double xi_minus) {
  if (k == 0.0 || xi_minus <= 0.0) return 0.0;
  const double w = envelope(tables.pulse(), xi);
  if (w == 0.0) return 0.0;
  const double lhs = 2.0 * k * w_perp(tables, xi, xi_minus).norm() / w;
  const double rhs = k * tables.pulse().wavelength * xi_minus / (2.0 * cgs::pi);
  return lhs / rhs;
}

ValidityDiagnostics validity_check(const FirstOrderTables& fo, const MotionTables& tables,
                                   const PlasmaSpec& plasma, const PulseSpec& pulse,
                                   double z_label, std::size_t bound_samples) {
  ValidityDiagnostics d;
  const double xi0 = peak_position(pulse);
  d.xi0 = xi0;
  d.t_at_peak = fo.t(xi0);
  const Grid& grid = fo.grid();
  const auto t = fo.t_nodes();
  d.max_t = d.t_at_peak;
  for (std::size_t i = 0; i < grid.size() && grid[i] <= xi0; ++i) d.max_t = std::max(d.max_t, t[i]);

  const double k = plasma.k;
  const double span_minus = 2.0 * tables.y3(xi0) + xi0 + 2.0 * z_label;
  d.condition_ratio = span_minus * k * pulse.wavelength / (2.0 * cgs::pi);
  d.condition_pass = d.condition_ratio <= kConditionThreshold;

  d.bound_samples = bound_samples;
  if (k == 0.0 || bound_samples == 0 || !(span_minus > 0.0)) return d;

  std::optional<MotionTables> companion;
  const MotionTables* osc = &tables;
  if (tables.pulse().mode != PulseMode::oscillatory) {
    PulseSpec p = tables.pulse();
    p.mode = PulseMode::oscillatory;
    companion.emplace(build_motion_tables(p, tables.grid()));
    osc = &*companion;
  }
  const double lo = std::max(0.0, support_begin(pulse));
  std::vector<double> xs(bound_samples), ms(bound_samples);
  for (std::size_t i = 0; i < bound_samples; ++i) {
    const double n = static_cast<double>(i);
    xs[i] = lo + (1.0 - frac(0.5 + n * kR2a)) * (xi0 - lo);
    ms[i] = (1.0 - frac(0.5 + n * kR2b)) * span_minus;
  }
  const auto ratios = kernels::bound_ratios_parallel(*osc, k, xs, ms);
  d.max_bound_ratio = *std::max_element(ratios.begin(), ratios.end());
  d.bound_pass = d.max_bound_ratio <= 1.0;
  return d;
}

void write_curves_csv(std::ostream& out, const MotionTables& tables, const FirstOrderTables& fo,
                      std::size_t stride) {
  if (stride == 0) throw InvalidArgument("write_curves_csv: stride must be positive");
  out << "xi_cm,w,uz0,Y3_cm,V3_cm2,betaz0,betaz1,g,T\n";
  const Grid& grid = fo.grid();
  const auto y3 = tables.y3_table().values();
  const auto v3 = tables.v3_table().values();
  const auto uz = tables.u_z_nodes();
  const auto bz1 = fo.beta_z1_nodes();
  const auto g = fo.g_nodes();
  const auto t = fo.t_nodes();
  char buf[512];
  for (std::size_t i = 0; i < grid.size(); i += stride) {
    const double xi = grid[i];
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g,%.15g\n", xi,
                  envelope(tables.pulse(), xi), uz[i], y3[i], v3[i], uz[i] / (1.0 + uz[i]), bz1[i],
                  g[i], t[i]);
    out << buf;
  }
}

}  // namespace pwave
