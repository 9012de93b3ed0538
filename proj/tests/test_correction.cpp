#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pwave/constants.hpp"
#include "pwave/correction.hpp"

using namespace pwave;
using fixture::rel;

namespace {

struct Setup {
  fixture::Matched mp;
  MotionTables gauss;
  MotionTables poly;
  double xi1;
  PlasmaSpec pg;
  PlasmaSpec pp;
  FirstOrderTables fg;
  FirstOrderTables fp;

  explicit Setup(const LaserSpec& laser)
      : mp(laser),
        gauss(build_motion_tables(mp.gauss, mp.grid)),
        poly(build_motion_tables(mp.poly, mp.grid)),
        xi1(mp.xi0 + 0.05 * mp.m.l_p),
        pg(solve_density_for_turning(gauss, xi1)),
        pp(solve_density_for_turning(poly, xi1)),
        fg(build_first_order(gauss, pg)),
        fp(build_first_order(poly, pp)) {}
};

const Setup& linear() {
  static const Setup s(fixture::flame());
  return s;
}

}  // namespace

TEST_CASE("PlasmaSpec construction") {
  const PlasmaSpec p = PlasmaSpec::from_density(1e18);
  CHECK(p.k == doctest::Approx(cgs::pi * cgs::classical_electron_radius * 1e18).epsilon(1e-15));
  CHECK(PlasmaSpec::from_k(p.k).n0 == doctest::Approx(1e18).epsilon(1e-15));
  CHECK_THROWS_AS(PlasmaSpec::from_density(-1.0), InvalidArgument);
  CHECK_THROWS_AS(PlasmaSpec::from_k(-1.0), InvalidArgument);
}

TEST_CASE("zero density recovers the free solution") {
  const auto& s = linear();
  const FirstOrderTables fo = build_first_order(s.poly, PlasmaSpec{});
  const auto uz = s.poly.u_z_nodes();
  for (std::size_t i = 0; i < uz.size(); ++i) {
    REQUIRE(fo.r_nodes()[i] == 0.0);
    REQUIRE(fo.s_nodes()[i] == 1.0);
    REQUIRE(fo.t_nodes()[i] == 0.0);
    REQUIRE(fo.beta_z1_nodes()[i] == doctest::Approx(uz[i] / (1.0 + uz[i])).epsilon(1e-15));
  }
  CHECK_FALSE(fo.turning_point().has_value());
  CHECK_THROWS_AS(first_turning_point(fo, s.poly), NoTurningPoint);
  CHECK_THROWS_AS(build_first_order(s.poly, PlasmaSpec{0.0, -1.0}), InvalidArgument);
  const ValidityDiagnostics v = validity_check(fo, s.poly, PlasmaSpec{}, s.mp.poly, 0.0, 50);
  CHECK(v.max_t == 0.0);
  CHECK(v.condition_ratio == 0.0);
  CHECK(v.max_bound_ratio == 0.0);
  CHECK(v.bound_pass);
  const TransverseCorrection c = transverse_correction(s.poly, PlasmaSpec{}, s.mp.xi0, 1e-3);
  CHECK(c.u_perp1 == c.u_perp0);
}

TEST_CASE("first-order node invariants") {
  const auto& s = linear();
  for (const auto& [t, fo] : {std::pair{&s.gauss, &s.fg}, std::pair{&s.poly, &s.fp}}) {
    const auto r = fo->r_nodes();
    const auto sn = fo->s_nodes();
    const auto v3 = t->v3_table().values();
    const auto uz = t->u_z_nodes();
    CHECK(sn[0] == 1.0);
    CHECK(fo->g_nodes()[0] == 0.0);
    CHECK(fo->big_g_nodes()[0] == 0.0);
    CHECK(fo->t_nodes()[0] == 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      REQUIRE(r[i] == 4.0 * fo->k() * v3[i]);
      REQUIRE(sn[i] == std::exp(r[i]));
      REQUIRE(fo->beta_z1_nodes()[i] <= uz[i] / (1.0 + uz[i]) + 1e-15);
      if (i > 0) REQUIRE(r[i] >= r[i - 1]);
      if (i > 0 && i + 1 < r.size()) REQUIRE(r[i + 1] - 2 * r[i] + r[i - 1] >= -1e-12 * r.back());
    }
  }
}

TEST_CASE("g, G and T on [0, xi0]") {
  const auto& s = linear();
  for (const auto& [t, fo] : {std::pair{&s.gauss, &s.fg}, std::pair{&s.poly, &s.fp}}) {
    const auto g = fo->g_nodes();
    const auto big_g = fo->big_g_nodes();
    const auto tt = fo->t_nodes();
    const auto y3 = t->y3_table().values();
    for (std::size_t i = 1; i < g.size() && s.mp.grid[i] <= s.mp.xi0; ++i) {
      if (y3[i] <= 0.0) continue;
      const double xi = s.mp.grid[i];
      REQUIRE(g[i] > g[i - 1]);
      // T is defined as 0 while Y3 < 1e-30 cm.
      if (y3[i] >= 1e-30) REQUIRE(tt[i] > tt[i - 1]);
      REQUIRE(big_g[i] < 2.0 * fo->k() * xi * xi * y3[i]);
      if (i + 1 < g.size()) REQUIRE(big_g[i + 1] - 2 * big_g[i] + big_g[i - 1] >= -1e-15 * big_g[i]);
    }
  }
}

TEST_CASE("r by double quadrature along the trajectory") {
  const auto& s = linear();
  for (const auto& [pulse, t, fo] : {std::tuple{&s.mp.poly, &s.poly, &s.fp}, std::tuple{&s.mp.gauss, &s.gauss, &s.fg}}) {
    for (double z : {0.0, 2e-3}) {
      for (double dx : {0.5 * s.mp.length, 0.9 * s.mp.length, 1.7 * s.mp.length}) {
        const auto path = oracle::integrate_path(*pulse, z, z + dx, 200000);
        const double r_direct = 4.0 * fo->k() * path.r_over_4k;
        const double r_table = 4.0 * fo->k() * t->v3(xi_of(*t, z + dx, z));
        CHECK(rel(r_direct, r_table) <= 1e-5);
      }
    }
  }
}

TEST_CASE("relative displacement error") {
  const auto& s = linear();
  CHECK(relative_displacement_error(s.fg, s.gauss, 1e-3, 1e-3) == 0.0);
  CHECK(relative_displacement_error(s.fg, s.gauss, 0.0, 1e-3) == 0.0);
  const double x0 = s.gauss.big_xi(s.mp.xi0) + 1e-3;
  CHECK(relative_displacement_error(s.fg, s.gauss, x0, 1e-3) == doctest::Approx(s.fg.t(s.mp.xi0)).epsilon(1e-9));
  // int_0^xi (1 + u_z) beta_z1 = Y3 - G, with beta_z1 from the closed-form V3.
  const PulseSpec& pulse = s.mp.poly;
  for (double xi : {0.6 * s.mp.xi0, s.mp.xi0, 1.05 * s.mp.xi0}) {
    const double lhs = oracle::gauss_legendre3(
        [&](double y) {
          const double uz = longitudinal_momentum_zero(pulse, y);
          const double v3 = polynomial_primitives_closed(pulse, y).v3;
          const double a = 1.0 + 2.0 * uz, e = std::exp(8.0 * s.pp.k * v3);
          return (1.0 + uz) * (a - e) / (a + e);
        },
        0.0, xi, 20000);
    CHECK(rel(lhs, s.poly.y3(xi) - s.fp.big_g(xi)) <= 1e-5);
  }
}

TEST_CASE("turning point and density solve") {
  const auto& s = linear();
  for (const auto& [t, fo, pl] : {std::tuple{&s.gauss, &s.fg, &s.pg}, std::tuple{&s.poly, &s.fp, &s.pp}}) {
    const double xi1 = first_turning_point(*fo, *t);
    CHECK(std::abs(xi1 - s.xi1) <= 1e-8);
    CHECK(fo->turning_point().has_value());
    CHECK(rel(1.0 + 2.0 * t->u_z(xi1), std::exp(8.0 * pl->k * t->v3(xi1))) <= 1e-8);
    CHECK(std::abs(first_order_at(*t, pl->k, s.xi1).beta_z1) <= 1e-10);
    // The bracketed root finder on the defining equation gives the same K.
    const double k_root = find_root_monotone(
        [&](double k) { return std::log1p(2.0 * t->u_z(s.xi1)) - 8.0 * k * t->v3(s.xi1); }, 0.0,
        1e8, 1e-6);
    CHECK(rel(k_root, pl->k) <= 1e-10);
  }
  // K(xi1) is strictly decreasing.
  double prev = INFINITY;
  for (int i = 1; i <= 60; ++i) {
    const double k = solve_density_for_turning(s.gauss, s.mp.length * i / 61.0).k;
    CHECK(k < prev);
    prev = k;
  }
  CHECK_THROWS_AS(solve_density_for_turning(s.poly, 0.1 * s.mp.xi0), InvalidArgument);
  CHECK_THROWS_AS(solve_density_for_turning(s.gauss, 0.0), InvalidArgument);
}

TEST_CASE("xi_hat") {
  const auto& s = linear();
  CHECK(xi_hat(s.poly, s.mp.xi0, 0.0) == 0.0);
  CHECK(xi_hat(s.poly, -1e-4, 2e-3) <= -1e-4);
  CHECK(s.poly.y_perp(xi_hat(s.poly, -1e-4, 2e-3)).norm() == 0.0);
  CHECK_THROWS_AS(xi_hat(s.poly, 1e-3, -1.0), InvalidArgument);
  for (double xm : {1e-4, 1.3e-3, 3e-3, 6e-3}) {
    const double big = 10.0 * s.mp.length;
    CHECK(xi_hat(s.poly, big, xm) <= big);
    CHECK(std::abs(xi_hat(s.poly, big, xm) - oracle::xi_hat_bisection(s.poly, big, xm)) <= 1e-10);
    CHECK(xi_hat(s.poly, 1e-4, xm) <= 1e-4);
  }
}

TEST_CASE("W_perp against the direct quadrature") {
  const auto& s = linear();
  CHECK(w_perp(s.poly, -1e-4, 1e-3).norm() == 0.0);
  CHECK(w_perp(s.poly, 1e-3, 0.0).norm() == 0.0);
  CHECK_THROWS_AS(w_perp(s.poly, 1e-3, -1e-3), InvalidArgument);
  for (const auto& [xi, xm] : {std::pair{0.8 * s.mp.xi0, 1.5e-3}, std::pair{s.mp.xi0, 4e-3},
                               std::pair{1.3 * s.mp.xi0, 2.5e-3}}) {
    const Vec2 w = w_perp(s.poly, xi, xm);
    const Vec2 d = oracle::w_perp_direct(s.poly, xi, xm);
    CHECK((w - d).norm() <= 1e-5 * d.norm());
  }
  const fixture::Matched osc(fixture::flame(), PulseMode::oscillatory);
  const MotionTables to = build_motion_tables(osc.poly, osc.grid);
  for (const auto& [xi, xm] : {std::pair{0.9 * osc.xi0, 1e-3}, std::pair{osc.xi0, 3e-3}}) {
    const Vec2 w = w_perp(to, xi, xm);
    const Vec2 d = oracle::w_perp_direct(to, xi, xm, 40000);
    const double scale = std::abs(to.y_perp(xi).norm()) * xm;
    CHECK((w - d).norm() <= 1e-4 * scale);
  }
}

TEST_CASE("transverse bound at random causal points") {
  const auto& s = linear();
  const fixture::Matched osc(fixture::flame(), PulseMode::oscillatory);
  const MotionTables to = build_motion_tables(osc.poly, osc.grid);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uxi(0.0, osc.xi0);
  const double xm_max = 2.0 * to.y3(osc.xi0) + osc.xi0;
  std::uniform_real_distribution<double> uxm(0.0, xm_max);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double xi = uxi(rng), xm = uxm(rng);
    const double r = bound_ratio(to, s.pp.k, xi, xm);
    const TransverseCorrection c = transverse_correction(to, s.pp, xi, xm);
    CHECK((c.u_perp1 - (c.u_perp0 - 2.0 * s.pp.k * c.w_perp)).norm() <= 1e-15 * (1.0 + c.u_perp0.norm()));
    worst = std::max(worst, r);
  }
  CHECK(worst <= 1.0);
}

TEST_CASE("validity diagnostics") {
  const auto& s = linear();
  const ValidityDiagnostics v = validity_check(s.fg, s.gauss, s.pg, s.mp.gauss, 0.0, 200);
  CHECK(v.xi0 == doctest::Approx(s.mp.xi0));
  CHECK(v.t_at_peak == doctest::Approx(s.fg.t(s.mp.xi0)));
  CHECK(v.max_t >= v.t_at_peak);
  const double cond = (2.0 * s.gauss.y3(s.mp.xi0) + s.mp.xi0) * s.pg.k * s.mp.laser.wavelength / (2.0 * cgs::pi);
  CHECK(v.condition_ratio == doctest::Approx(cond).epsilon(1e-12));
  CHECK(v.condition_pass == (cond <= kConditionThreshold));
  CHECK(v.bound_samples == 200);
  // The Z term enters the condition.
  const ValidityDiagnostics vz = validity_check(s.fg, s.gauss, s.pg, s.mp.gauss, 1e-3, 10);
  CHECK(vz.condition_ratio > v.condition_ratio);
}

TEST_CASE("curves CSV") {
  const auto& s = linear();
  std::ostringstream out;
  write_curves_csv(out, s.poly, s.fp, 1000);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "xi_cm,w,uz0,Y3_cm,V3_cm2,betaz0,betaz1,g,T");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 21);
  CHECK_THROWS_AS(write_curves_csv(out, s.poly, s.fp, 0), InvalidArgument);
}
