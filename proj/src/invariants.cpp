#include "pwave/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "pwave/correction.hpp"
#include "pwave/errors.hpp"
#include "pwave/kernels.hpp"
#include "pwave/kinematics.hpp"
#include "pwave/slingshot.hpp"

namespace pwave {

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Setup {
  MatchedPulse matched;
  double length = 0.0;
  double xi0 = 0.0;
  double xi1 = 0.0;
  PulseSpec gauss;
  PulseSpec poly;
  Grid grid;
  MotionTables gauss_tables;
  MotionTables poly_tables;
  PlasmaSpec gauss_plasma;
  PlasmaSpec poly_plasma;
  FirstOrderTables gauss_fo;
  FirstOrderTables poly_fo;
};

Setup make_setup(const RunConfig& config) {
  const LaserSpec& laser = config.laser;
  const MatchedPulse m = match_pulse_parameters(laser);
  const double l = ionization_length(m.a_g, m.sigma, config.scenario.ionization_ev,
                                     m.polarization_factor);
  const double xi0 = 0.5 * l;
  const PulseSpec g = gaussian_pulse(m, laser, l);
  const PulseSpec p = polynomial_pulse(m, laser, xi0);
  const double end = std::max(support_end(g), support_end(p));
  const Grid grid = Grid::uniform(0.0, end, config.scenario.grid_intervals);
  MotionTables gt = build_motion_tables(g, grid);
  MotionTables pt = build_motion_tables(p, grid);
  const double xi1 = xi0 + config.scenario.turning.offset(m, laser);
  const PlasmaSpec gk = solve_density_for_turning(gt, xi1);
  const PlasmaSpec pk = solve_density_for_turning(pt, xi1);
  FirstOrderTables gfo = build_first_order(gt, gk);
  FirstOrderTables pfo = build_first_order(pt, pk);
  return Setup{m, l, xi0, xi1, g, p, grid, std::move(gt), std::move(pt), gk, pk,
               std::move(gfo), std::move(pfo)};
}

class Suite {
 public:
  void check(const std::string& name, const std::function<Outcome()>& fn) {
    InvariantResult r{name, false, {}};
    try {
      const Outcome o = fn();
      r.passed = o.ok;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    results_.push_back(std::move(r));
  }
  std::vector<InvariantResult> take() { return std::move(results_); }

 private:
  std::vector<InvariantResult> results_;
};

// Tables of both envelopes with a label for messages.
struct Named {
  const char* name;
  const MotionTables* tables;
  const FirstOrderTables* fo;
  const PlasmaSpec* plasma;
};

}  // namespace

std::vector<InvariantResult> run_invariant_suite(const RunConfig& config) {
  Suite suite;
  std::optional<Setup> setup;
  suite.check("pipeline setup", [&] {
    setup.emplace(make_setup(config));
    return Outcome{true, "matched pulses, tables and first-order tables built"};
  });
  if (!setup) return suite.take();
  const Setup& s = *setup;
  const std::array<Named, 2> both{{{"gaussian", &s.gauss_tables, &s.gauss_fo, &s.gauss_plasma},
                                   {"polynomial", &s.poly_tables, &s.poly_fo, &s.poly_plasma}}};
  const bool fault = config.inject_fault == "monotone";
  std::mt19937_64 rng(20240601);

  // numerics

  suite.check("Y3 nondecreasing", [&] {
    for (const auto& n : both) {
      std::vector<double> v(n.tables->y3_table().values().begin(),
                            n.tables->y3_table().values().end());
      if (fault) std::swap(v[v.size() / 2], v[v.size() / 2 + 7]);
      const MonotoneTable t(s.grid, v, std::vector<double>(v.size(), 0.0),
                            Monotonicity::nondecreasing);
      (void)t;
    }
    return Outcome{true, "monotone table rebuilt from node values"};
  });

  suite.check("Xi strictly increasing and invertible", [&] {
    double worst = 0.0;
    std::uniform_real_distribution<double> u(0.0, s.grid.back());
    for (const auto& n : both) {
      const auto v = n.tables->big_xi_table().values();
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return Outcome{false, std::string(n.name) + ": Xi not increasing"};
      }
      for (int i = 0; i < 100; ++i) {
        const double xi = u(rng);
        worst = std::max(worst, std::abs(n.tables->big_xi_inverse(n.tables->big_xi(xi)) - xi));
      }
    }
    return Outcome{worst <= 1e-10, fmt("max |Xi^-1(Xi(xi)) - xi| = %.3g cm", worst)};
  });

  suite.check("quadrature convergence order", [&] {
    // Y3(xi0) of the polynomial pulse on coarse grids against the closed form.
    const double exact = polynomial_primitives_closed(s.poly, s.xi0 + 0.3 * s.matched.l_p).y3;
    std::array<double, 3> err{};
    const double end = support_end(s.poly);
    for (int j = 0; j < 3; ++j) {
      const Grid g = Grid::uniform(0.0, end, std::size_t{60} << j);
      err[j] = std::abs(build_motion_tables(s.poly, g).y3(s.xi0 + 0.3 * s.matched.l_p) - exact);
    }
    const double order = std::log2(err[1] / err[2]);
    return Outcome{order >= 1.9, fmt("observed order %.2f", order)};
  });

  // pulse

  suite.check("envelope nonnegative, zero at xi <= 0", [&] {
    for (const auto* p : {&s.gauss, &s.poly}) {
      if (envelope(*p, 0.0 - 1e-9) != 0.0 || envelope(*p, -1.0) != 0.0) {
        return Outcome{false, "w nonzero at xi < 0"};
      }
      for (std::size_t i = 0; i < s.grid.size(); i += 97) {
        if (envelope(*p, s.grid[i]) < 0.0) return Outcome{false, "w < 0"};
      }
    }
    return Outcome{true, ""};
  });

  suite.check("envelope symmetry about xi0", [&] {
    double worst = 0.0;
    for (const auto* p : {&s.gauss, &s.poly}) {
      for (int i = 1; i <= 50; ++i) {
        const double d = 0.018 * i * s.matched.l_p;
        const double a = envelope(*p, s.xi0 + d), b = envelope(*p, s.xi0 - d);
        if (a > 0.0 || b > 0.0) worst = std::max(worst, rel(a, b));
      }
    }
    return Outcome{worst <= 1e-12, fmt("max relative asymmetry %.3g", worst)};
  });

  suite.check("closed-form Y3, V3 vs quadrature", [&] {
    double worst = 0.0;
    const double begin = support_begin(s.poly);
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      const double xi = s.grid[i];
      if (xi <= begin) continue;
      const auto c = polynomial_primitives_closed(s.poly, xi);
      if (c.y3 > 0.0) {
        worst = std::max(worst, rel(s.poly_tables.y3_table().values()[i], c.y3));
        worst = std::max(worst, rel(s.poly_tables.v3_table().values()[i], c.v3));
      }
    }
    return Outcome{worst <= 1e-8, fmt("max relative difference %.3g", worst)};
  });

  // kinematics

  suite.check("gamma >= 1 and V3 convex", [&] {
    for (const auto& n : both) {
      for (double uz : n.tables->u_z_nodes()) {
        if (!(uz >= 0.0)) return Outcome{false, std::string(n.name) + ": u_z < 0"};
      }
      const auto v = n.tables->v3_table().values();
      const double tol = 1e-12 * v.back();
      for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i + 1] - 2.0 * v[i] + v[i - 1] < -tol) {
          return Outcome{false, std::string(n.name) + ": V3 not convex at node " + std::to_string(i)};
        }
      }
    }
    return Outcome{true, ""};
  });

  suite.check("V3 / Y3 < xi / 2", [&] {
    for (const auto& n : both) {
      const auto y3 = n.tables->y3_table().values();
      const auto v3 = n.tables->v3_table().values();
      // Open interval (0, l): at xi = l a symmetric pulse gives equality.
      for (std::size_t i = 0; i < y3.size() && s.grid[i] < s.length; ++i) {
        if (y3[i] > 0.0 && !(v3[i] < 0.5 * s.grid[i] * y3[i])) {
          return Outcome{false, std::string(n.name) + fmt(": fails at xi = %.6g", s.grid[i])};
        }
      }
    }
    return Outcome{true, ""};
  });

  suite.check("trajectory / label round trip", [&] {
    double worst = 0.0;
    std::uniform_real_distribution<double> uz(-s.length, s.length);
    std::uniform_real_distribution<double> ux(0.0, 3.0 * s.length);
    for (const auto& n : both) {
      for (int i = 0; i < 100; ++i) {
        const FluidLabel label{uz(rng), {1e-4, -2e-4}};
        const double x0 = label.z + ux(rng);
        const Position p = trajectory_zero(*n.tables, x0, label);
        const FluidLabel back = label_from_position(*n.tables, x0, p.z, p.perp);
        worst = std::max({worst, std::abs(back.z - label.z), (back.perp - label.perp).norm()});
      }
    }
    return Outcome{worst <= 1e-10, fmt("max label error %.3g cm", worst)};
  });

  suite.check("dZ/dz = gamma, dZ/dx0 = -u_z", [&] {
    double worst = 0.0;
    const double h = 1e-8;
    for (const auto& n : both) {
      for (int i = 1; i <= 40; ++i) {
        const double xi = s.xi0 * (0.2 + 0.035 * i);
        const double z = 1e-3, x0 = z + xi;
        auto big_z = [&](double t, double zz) { return label_from_position(*n.tables, t, zz).z; };
        const double dz = (big_z(x0, z + h) - big_z(x0, z - h)) / (2.0 * h);
        const double dt = (big_z(x0 + h, z) - big_z(x0 - h, z)) / (2.0 * h);
        worst = std::max(worst, rel(dz, n.tables->gamma(xi)));
        worst = std::max(worst, std::abs(dt + n.tables->u_z(xi)) / n.tables->gamma(xi));
      }
    }
    return Outcome{worst <= 1e-4, fmt("max relative error %.3g", worst)};
  });

  suite.check("dz/dZ in (0, 1], z nondecreasing in x0", [&] {
    for (const auto& n : both) {
      for (int i = 0; i <= 200; ++i) {
        const double x0 = 0.02 * i * s.length;
        const double z1 = trajectory_zero(*n.tables, x0, {0.0, {}}).z;
        const double z2 = trajectory_zero(*n.tables, x0, {1e-6, {}}).z;
        const double d = (z2 - z1) / 1e-6;
        if (!(d > 0.0 && d <= 1.0 + 1e-9)) {
          return Outcome{false, std::string(n.name) + fmt(": dz/dZ = %.6g at x0 = %.6g", d, x0)};
        }
        const double z_next = trajectory_zero(*n.tables, x0 + 0.02 * s.length, {0.0, {}}).z;
        // x0 - Xi^-1(x0) carries rounding of order eps x0 once the pulse has passed.
        if (z_next < z1 - 4e-16 * (x0 + s.length)) return Outcome{false, std::string(n.name) + ": z decreased"};
      }
    }
    return Outcome{true, ""};
  });

  suite.check("displacement at fixed phase independent of Z", [&] {
    double worst = 0.0;
    for (const auto& n : both) {
      for (double phase : {0.3 * s.xi0, s.xi0, 1.4 * s.xi0}) {
        for (double z : {0.0, 1e-3, 0.1, 3.0}) {
          const double x0 = n.tables->big_xi(phase) + z;
          const double dz = trajectory_zero(*n.tables, x0, {z, {}}).z - z;
          worst = std::max(worst, std::abs(dz - n.tables->y3(phase)));
        }
      }
    }
    return Outcome{worst <= 1e-10, fmt("max deviation %.3g cm", worst)};
  });

  suite.check("recover_from_s identities", [&] {
    double worst = 0.0;
    std::uniform_real_distribution<double> uu(-20.0, 20.0), us(0.01, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const Vec2 u{uu(rng), uu(rng)};
      const double sv = us(rng);
      const Kinematics k = recover_from_s(u, sv);
      const double lhs = k.gamma * k.gamma;
      const double rhs = 1.0 + u.norm2() + k.u_z * k.u_z;
      worst = std::max({worst, rel(lhs, rhs), std::abs(k.gamma - k.u_z - sv) / k.gamma});
    }
    return Outcome{worst <= 1e-12, fmt("max relative error %.3g", worst)};
  });

  suite.check("velocity ratio |beta_perp| / beta_z = 2 / |u_perp|", [&] {
    double worst = 0.0;
    for (int i = 1; i < 100; ++i) {
      const double xi = s.grid.back() * i / 100.0;
      const Vec2 u = s.poly_tables.u_perp(xi);
      if (u.norm() == 0.0) continue;
      const Kinematics k = recover_from_s(u, 1.0);
      worst = std::max(worst, rel(k.beta_perp.norm() / k.beta_z, 2.0 / u.norm()));
    }
    return Outcome{worst <= 1e-12, fmt("max relative error %.3g", worst)};
  });

  suite.check("beta_z0 >= 0", [&] {
    for (const auto& n : both) {
      for (double uz : n.tables->u_z_nodes()) {
        if (uz / (1.0 + uz) < 0.0) return Outcome{false, n.name};
      }
    }
    return Outcome{true, ""};
  });

  suite.check("mass conservation of n0", [&] {
    double worst = 0.0;
    const double n0 = s.gauss_plasma.n0;
    for (const auto& n : both) {
      for (double x0 : {0.5 * s.xi0, s.xi0 + 2e-3, 2.0 * s.length + 1e-2}) {
        const double za = 1e-3, zb = 6e-3;
        const double a = trajectory_zero(*n.tables, x0, {za, {}}).z;
        const double b = trajectory_zero(*n.tables, x0, {zb, {}}).z;
        // Composite 5-point Gauss-Legendre over [a, b].
        static constexpr double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                         0.5384693101056831, 0.9061798459386640};
        static constexpr double wg[5] = {0.2369268850561891, 0.4786286704993665,
                                         0.5688888888888889, 0.4786286704993665,
                                         0.2369268850561891};
        const int panels = 4000;
        const double h = (b - a) / panels;
        double sum = 0.0;
        for (int p = 0; p < panels; ++p) {
          const double mid = a + (p + 0.5) * h;
          for (int j = 0; j < 5; ++j) {
            sum += 0.5 * h * wg[j] * density_zero(*n.tables, n0, x0, mid + 0.5 * h * xg[j]);
          }
        }
        worst = std::max(worst, rel(sum, n0 * (zb - za)));
      }
    }
    return Outcome{worst <= 1e-5, fmt("max relative error %.3g", worst)};
  });

  // correction

  suite.check("r nondecreasing, s = exp(4 K V3), s(0) = 1", [&] {
    for (const auto& n : both) {
      const auto r = n.fo->r_nodes();
      const auto sv = n.fo->s_nodes();
      const auto v3 = n.tables->v3_table().values();
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0 && r[i] < r[i - 1]) return Outcome{false, std::string(n.name) + ": r decreased"};
        if (sv[i] != std::exp(4.0 * n.plasma->k * v3[i])) {
          return Outcome{false, std::string(n.name) + ": s differs from exp(4 K V3)"};
        }
      }
      if (sv[0] != 1.0) return Outcome{false, std::string(n.name) + ": s(0) != 1"};
    }
    return Outcome{true, ""};
  });

  suite.check("g(0) = G(0) = T(0) = 0", [&] {
    for (const auto& n : both) {
      if (n.fo->g_nodes()[0] != 0.0 || n.fo->big_g_nodes()[0] != 0.0 || n.fo->t_nodes()[0] != 0.0) {
        return Outcome{false, n.name};
      }
    }
    return Outcome{true, ""};
  });

  suite.check("beta_z1 <= beta_z0", [&] {
    for (const auto& n : both) {
      const auto b1 = n.fo->beta_z1_nodes();
      const auto uz = n.tables->u_z_nodes();
      for (std::size_t i = 0; i < b1.size(); ++i) {
        if (b1[i] > uz[i] / (1.0 + uz[i]) + 1e-15) {
          return Outcome{false, std::string(n.name) + fmt(": fails at xi = %.6g", s.grid[i])};
        }
      }
    }
    return Outcome{true, ""};
  });

  suite.check("g increasing, G < 2 K xi^2 Y3, T nondecreasing on [0, xi0]", [&] {
    for (const auto& n : both) {
      const auto g = n.fo->g_nodes();
      const auto big_g = n.fo->big_g_nodes();
      const auto t = n.fo->t_nodes();
      const auto y3 = n.tables->y3_table().values();
      for (std::size_t i = 1; i < g.size() && s.grid[i] <= s.xi0; ++i) {
        const std::string at = std::string(n.name) + fmt(" at xi = %.6g", s.grid[i]);
        if (y3[i] > 0.0 && !(g[i] > g[i - 1])) return Outcome{false, "g not increasing, " + at};
        if (y3[i] > 0.0 && !(big_g[i] < 2.0 * n.plasma->k * s.grid[i] * s.grid[i] * y3[i])) {
          return Outcome{false, "G bound fails, " + at};
        }
        if (t[i] < t[i - 1]) return Outcome{false, "T decreased, " + at};
      }
    }
    return Outcome{true, ""};
  });

  suite.check("beta_z1(xi1) = 0 after the density solve", [&] {
    double worst = 0.0;
    for (const auto& n : both) {
      const double xi1 = first_turning_point(*n.fo, *n.tables);
      worst = std::max(worst, std::abs(xi1 - s.xi1));
      worst = std::max(worst, std::abs(first_order_at(*n.tables, n.plasma->k, s.xi1).beta_z1));
    }
    return Outcome{worst <= 1e-8, fmt("max |xi1 - xi1*|, |beta_z1| = %.3g", worst)};
  });

  suite.check("K(xi1) strictly decreasing", [&] {
    for (const auto& n : both) {
      double prev = INFINITY;
      for (int i = 0; i <= 40; ++i) {
        const double xi1 = s.xi0 + (support_end(n.tables->pulse()) - s.xi0) * (0.01 + 0.0245 * i);
        const double k = solve_density_for_turning(*n.tables, xi1).k;
        if (!(k < prev)) return Outcome{false, std::string(n.name) + fmt(" at xi1 = %.6g", xi1)};
        prev = k;
      }
    }
    return Outcome{true, ""};
  });

  suite.check("z0 - z1 = G >= 0", [&] {
    for (const auto& n : both) {
      for (double gv : n.fo->big_g_nodes()) {
        if (gv < 0.0) return Outcome{false, n.name};
      }
    }
    return Outcome{true, ""};
  });

  suite.check("transverse bound (polynomial, oscillatory)", [&] {
    const auto d = validity_check(s.poly_fo, s.poly_tables, s.poly_plasma, s.poly, 0.0,
                                  config.scenario.bound_samples);
    return Outcome{d.bound_pass, fmt("max ratio %.4f over %.0f points", d.max_bound_ratio,
                                     static_cast<double>(d.bound_samples))};
  });

  // slingshot

  suite.check("zeta = Y3(xi0) of the polynomial tables", [&] {
    const double e = rel(s.poly_tables.y3(s.xi0), s.matched.zeta);
    return Outcome{e <= 0.02, fmt("relative difference %.3g", e)};
  });

  suite.check("matched envelopes carry equal energy", [&] {
    const double eg = envelope_square_integral(s.gauss);
    const double ep = envelope_square_integral(s.poly);
    const double pe = pulse_energy(s.poly_tables, s.matched.radius);
    const double e1 = rel(ep, eg);
    const double e2 = rel(pe, config.laser.energy);
    return Outcome{e1 < 0.02 && e2 < 0.05,
                   fmt("int w^2 difference %.3g, energy round trip %.3g", e1, e2)};
  });

  suite.check("zeta scales as E^1/3 nu^-2/3", [&] {
    double worst = 0.0;
    const double z0 = s.matched.zeta;
    for (double fe : {0.5, 1.0, 8.0}) {
      for (double nu : {1.0, 2.0, 3.0}) {
        LaserSpec l = config.laser;
        l.energy *= fe;
        l.aspect *= nu;
        const double expect = z0 * std::cbrt(fe) * std::pow(nu, -2.0 / 3.0);
        worst = std::max(worst, rel(match_pulse_parameters(l).zeta, expect));
      }
    }
    return Outcome{worst <= 1e-12, fmt("max relative deviation %.3g", worst)};
  });

  suite.check("H nondecreasing in n0", [&] {
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double h = exit_energy(PlasmaSpec::from_density(1e17 * i).k, s.matched.zeta).h_mev;
      if (h < prev) return Outcome{false, fmt("H decreased at n0 = %.3g", 1e17 * i)};
      prev = h;
    }
    return Outcome{true, ""};
  });

  // kernels

  suite.check("serial and OpenMP kernels agree bitwise", [&] {
    const auto a = kernels::sample_pulse_serial(s.poly, s.grid);
    const auto b = kernels::sample_pulse_parallel(s.poly, s.grid);
    if (a.ux != b.ux || a.uy != b.uy || a.uz != b.uz) return Outcome{false, "pulse samples"};
    const auto v3 = s.poly_tables.v3_table().values();
    const auto fa = kernels::first_order_nodes_serial(s.poly_tables.u_z_nodes(), v3, s.poly_plasma.k);
    const auto fb = kernels::first_order_nodes_parallel(s.poly_tables.u_z_nodes(), v3, s.poly_plasma.k);
    if (fa.r != fb.r || fa.s != fb.s || fa.beta_z1 != fb.beta_z1 || fa.g != fb.g) {
      return Outcome{false, "first-order nodes"};
    }
    std::vector<double> x0(500);
    std::vector<FluidLabel> labels(500);
    for (std::size_t i = 0; i < x0.size(); ++i) {
      x0[i] = 1e-5 * static_cast<double>(i);
      labels[i] = {1e-6 * static_cast<double>(i % 7), {}};
    }
    const auto ta = kernels::trajectory_batch_serial(s.poly_tables, x0, labels);
    const auto tb = kernels::trajectory_batch_parallel(s.poly_tables, x0, labels);
    for (std::size_t i = 0; i < ta.size(); ++i) {
      if (ta[i].z != tb[i].z || ta[i].perp != tb[i].perp || ta[i].gamma != tb[i].gamma) {
        return Outcome{false, "trajectory batch"};
      }
    }
    return Outcome{true, ""};
  });

  return suite.take();
}

}  // namespace pwave
