#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

struct Rates {
  double dz, dtau, dr;
};

Rates rates(const pwave::PulseSpec& pulse, double z_label, double x0, double z) {
  const double uz = pwave::longitudinal_momentum_zero(pulse, x0 - z);
  const double inv_gamma = 1.0 / (1.0 + uz);
  return {uz * inv_gamma, inv_gamma, (z - z_label) * inv_gamma};
}

}  // namespace

PathState integrate_path(const pwave::PulseSpec& pulse, double z_label, double x0_end,
                         int steps) {
  PathState s{z_label, 0.0, 0.0};
  if (x0_end <= z_label) return s;
  const double h = (x0_end - z_label) / steps;
  double x0 = z_label;
  for (int i = 0; i < steps; ++i) {
    const Rates k1 = rates(pulse, z_label, x0, s.z);
    const Rates k2 = rates(pulse, z_label, x0 + 0.5 * h, s.z + 0.5 * h * k1.dz);
    const Rates k3 = rates(pulse, z_label, x0 + 0.5 * h, s.z + 0.5 * h * k2.dz);
    const Rates k4 = rates(pulse, z_label, x0 + h, s.z + h * k3.dz);
    s.z += h / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
    s.tau += h / 6.0 * (k1.dtau + 2.0 * k2.dtau + 2.0 * k3.dtau + k4.dtau);
    s.r_over_4k += h / 6.0 * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
    x0 += h;
  }
  return s;
}

double gauss_legendre3(const std::function<double(double)>& f, double a, double b, int panels) {
  const double x = std::sqrt(0.6);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = a + (i + 0.5) * h;
    const double half = 0.5 * h;
    sum += half * (5.0 * f(mid - half * x) + 8.0 * f(mid) + 5.0 * f(mid + half * x)) / 9.0;
  }
  return sum;
}

double xi_hat_bisection(const pwave::MotionTables& tables, double xi, double xi_minus_prime) {
  // x0 + z(x0, 0) is increasing in x0 and equals x0 for x0 <= 0.
  auto crossing = [&](double x0) {
    return x0 + pwave::trajectory_zero(tables, x0, {0.0, {}}).z - xi_minus_prime;
  };
  double lo = std::min(0.0, xi_minus_prime);
  double hi = std::max(1e-12, xi_minus_prime);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (crossing(mid) > 0.0 ? hi : lo) = mid;
  }
  const double x0 = 0.5 * (lo + hi);
  const double eta = x0 - pwave::trajectory_zero(tables, x0, {0.0, {}}).z;
  return std::min(xi, eta);
}

pwave::Vec2 w_perp_direct(const pwave::MotionTables& tables, double xi, double xi_minus,
                          int nodes) {
  if (xi <= 0.0 || xi_minus <= 0.0) return {};
  const double h = xi_minus / (nodes - 1);
  pwave::Vec2 sum{};
  for (int i = 0; i < nodes; ++i) {
    const double weight = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    sum += weight * tables.y_perp(xi_hat_bisection(tables, xi, i * h));
  }
  return 0.5 * h * sum;
}

double slab_electrons(const pwave::MotionTables& tables, double n0, double x0, double za,
                      double zb, int panels) {
  const double a = pwave::trajectory_zero(tables, x0, {za, {}}).z;
  const double b = pwave::trajectory_zero(tables, x0, {zb, {}}).z;
  return gauss_legendre3([&](double z) { return pwave::density_zero(tables, n0, x0, z); }, a, b,
                         panels);
}

}  // namespace oracle
