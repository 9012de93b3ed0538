#include "pwave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pwave/correction.hpp"
#include "pwave/errors.hpp"

namespace pwave::kernels {

namespace {

using Index = std::ptrdiff_t;

PulseSamples allocate(std::size_t n) {
  return {std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
}

void pulse_at(const PulseSpec& pulse, const Grid& grid, PulseSamples& out, std::size_t i) {
  const double xi = grid[i];
  const Vec2 u = transverse_momentum_zero(pulse, xi);
  out.ux[i] = u.x;
  out.uy[i] = u.y;
  out.uz[i] = longitudinal_momentum_zero(pulse, xi);
}

IntervalIntegrals allocate_intervals(std::size_t nodes) {
  const std::size_t n = nodes > 0 ? nodes - 1 : 0;
  return {std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
          std::vector<double>(n)};
}

void interval_at(const PulseSpec& pulse, const Grid& grid, std::span<const double> breaks,
                 IntervalIntegrals& out, std::size_t i) {
  const double a = grid[i];
  const double b = grid[i + 1];
  auto uz = [&](double xi) { return longitudinal_momentum_zero(pulse, xi); };
  out.ux[i] = gauss_legendre5_split(
      [&](double xi) { return transverse_momentum_zero(pulse, xi).x; }, a, b, breaks);
  out.uy[i] = gauss_legendre5_split(
      [&](double xi) { return transverse_momentum_zero(pulse, xi).y; }, a, b, breaks);
  out.uz[i] = gauss_legendre5_split(uz, a, b, breaks);
  out.uz_moment[i] =
      gauss_legendre5_split([&](double xi) { return (b - xi) * uz(xi); }, a, b, breaks);
}

double g_interval(const MotionTables& tables, double k, std::span<const double> breaks,
                  std::size_t i) {
  const Grid& grid = tables.grid();
  return gauss_legendre5_split(
      [&](double xi) { return first_order_point(tables.u_z(xi), tables.v3(xi), k).g; }, grid[i],
      grid[i + 1], breaks);
}

FirstOrderNodes allocate_first_order(std::size_t n) {
  return {std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
          std::vector<double>(n)};
}

void first_order_at_node(std::span<const double> u_z, std::span<const double> v3, double k,
                         FirstOrderNodes& out, std::size_t i) {
  const FirstOrderPoint p = first_order_point(u_z[i], v3[i], k);
  out.r[i] = p.r;
  out.s[i] = p.s;
  out.beta_z1[i] = p.beta_z1;
  out.g[i] = p.g;
}

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": input length mismatch");
}

// Exceptions cannot leave an OpenMP region, so inputs are screened first.
void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + ": non-finite input");
  }
}

void check_labels(std::span<const FluidLabel> labels) {
  for (const auto& l : labels) {
    if (!std::isfinite(l.z) || !std::isfinite(l.perp.x) || !std::isfinite(l.perp.y)) {
      throw InvalidArgument("trajectory_batch: non-finite label");
    }
  }
}

}  // namespace

PulseSamples sample_pulse_serial(const PulseSpec& pulse, const Grid& grid) {
  PulseSamples out = allocate(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) pulse_at(pulse, grid, out, i);
  return out;
}

PulseSamples sample_pulse_parallel(const PulseSpec& pulse, const Grid& grid) {
  PulseSamples out = allocate(grid.size());
  const Index n = static_cast<Index>(grid.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) pulse_at(pulse, grid, out, static_cast<std::size_t>(i));
  return out;
}

IntervalIntegrals interval_integrals_serial(const PulseSpec& pulse, const Grid& grid) {
  IntervalIntegrals out = allocate_intervals(grid.size());
  const std::vector<double> breaks = breakpoints(pulse);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) interval_at(pulse, grid, breaks, out, i);
  return out;
}

IntervalIntegrals interval_integrals_parallel(const PulseSpec& pulse, const Grid& grid) {
  IntervalIntegrals out = allocate_intervals(grid.size());
  const std::vector<double> breaks = breakpoints(pulse);
  const Index n = static_cast<Index>(grid.size()) - 1;
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) interval_at(pulse, grid, breaks, out, static_cast<std::size_t>(i));
  return out;
}

std::vector<double> g_integrals_serial(const MotionTables& tables, double k) {
  const std::size_t n = tables.grid().size() - 1;
  const std::vector<double> breaks = breakpoints(tables.pulse());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = g_interval(tables, k, breaks, i);
  return out;
}

std::vector<double> g_integrals_parallel(const MotionTables& tables, double k) {
  if (!std::isfinite(k)) throw InvalidArgument("g_integrals: non-finite K");
  const Index n = static_cast<Index>(tables.grid().size()) - 1;
  const std::vector<double> breaks = breakpoints(tables.pulse());
  std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = g_interval(tables, k, breaks, static_cast<std::size_t>(i));
  return out;
}

std::vector<TrajectorySample> trajectory_batch_serial(const MotionTables& tables,
                                                      std::span<const double> x0,
                                                      std::span<const FluidLabel> labels) {
  check_same_size(x0.size(), labels.size(), "trajectory_batch");
  std::vector<TrajectorySample> out(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = trajectory_sample(tables, x0[i], labels[i]);
  return out;
}

std::vector<TrajectorySample> trajectory_batch_parallel(const MotionTables& tables,
                                                        std::span<const double> x0,
                                                        std::span<const FluidLabel> labels) {
  check_same_size(x0.size(), labels.size(), "trajectory_batch");
  check_finite(x0, "trajectory_batch");
  check_labels(labels);
  std::vector<TrajectorySample> out(x0.size());
  const Index n = static_cast<Index>(x0.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    out[j] = trajectory_sample(tables, x0[j], labels[j]);
  }
  return out;
}

FirstOrderNodes first_order_nodes_serial(std::span<const double> u_z, std::span<const double> v3,
                                         double k) {
  check_same_size(u_z.size(), v3.size(), "first_order_nodes");
  FirstOrderNodes out = allocate_first_order(u_z.size());
  for (std::size_t i = 0; i < u_z.size(); ++i) first_order_at_node(u_z, v3, k, out, i);
  return out;
}

FirstOrderNodes first_order_nodes_parallel(std::span<const double> u_z,
                                           std::span<const double> v3, double k) {
  check_same_size(u_z.size(), v3.size(), "first_order_nodes");
  FirstOrderNodes out = allocate_first_order(u_z.size());
  const Index n = static_cast<Index>(u_z.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) first_order_at_node(u_z, v3, k, out, static_cast<std::size_t>(i));
  return out;
}

std::vector<double> bound_ratios_serial(const MotionTables& tables, double k,
                                        std::span<const double> xi,
                                        std::span<const double> xi_minus) {
  check_same_size(xi.size(), xi_minus.size(), "bound_ratios");
  std::vector<double> out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = bound_ratio(tables, k, xi[i], xi_minus[i]);
  return out;
}

std::vector<double> bound_ratios_parallel(const MotionTables& tables, double k,
                                          std::span<const double> xi,
                                          std::span<const double> xi_minus) {
  check_same_size(xi.size(), xi_minus.size(), "bound_ratios");
  check_finite(xi, "bound_ratios");
  check_finite(xi_minus, "bound_ratios");
  for (double m : xi_minus) {
    if (m < 0.0) throw InvalidArgument("bound_ratios: xi_minus must be >= 0");
  }
  std::vector<double> out(xi.size());
  const Index n = static_cast<Index>(xi.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (Index i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(i);
    out[j] = bound_ratio(tables, k, xi[j], xi_minus[j]);
  }
  return out;
}

}  // namespace pwave::kernels
