#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pwave/constants.hpp"
#include "pwave/kinematics.hpp"

using namespace pwave;
using fixture::rel;

namespace {

// Identically vanishing sampled envelope on a grid reaching below 0.
MotionTables zero_tables() {
  PulseSpec p;
  p.wavelength = 8e-5;
  p.envelope = SampledEnvelope({0.0, 2e-3}, {0.0, 0.0});
  return build_motion_tables(p, Grid::uniform(-5e-4, 2e-3, 1000));
}

struct Flame {
  fixture::Matched mp{fixture::flame()};
  MotionTables gauss = build_motion_tables(mp.gauss, mp.grid);
  MotionTables poly = build_motion_tables(mp.poly, mp.grid);
};

const Flame& flame() {
  static const Flame f;
  return f;
}

}  // namespace

TEST_CASE("zero pulse") {
  const MotionTables t = zero_tables();
  for (double xi : {-1e-4, 0.0, 3e-4, 1.9e-3, 5e-3}) {
    CHECK(t.y3(xi) == 0.0);
    CHECK(t.v3(xi) == 0.0);
    CHECK(t.big_xi(xi) == xi);
    CHECK(t.y_perp(xi).norm() == 0.0);
  }
  CHECK(t.big_xi_inverse(0.7e-3) == doctest::Approx(0.7e-3).epsilon(1e-14));
  CHECK(xi_of(t, 2e-3, 5e-4) == doctest::Approx(1.5e-3).epsilon(1e-13));
  const Position p = trajectory_zero(t, 3e-3, {1e-4, {2e-5, 3e-5}});
  CHECK(p.z == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(p.perp.x == 2e-5);
  CHECK(proper_time(t, 2.5e-3, 1e-3) == doctest::Approx(1.5e-3).epsilon(1e-12));
}

TEST_CASE("build_motion_tables preconditions") {
  const fixture::Matched mp(fixture::flame());
  CHECK_THROWS_AS(build_motion_tables(mp.gauss, Grid::uniform(1e-5, mp.length, 100)), InvalidArgument);
  CHECK_THROWS_AS(build_motion_tables(mp.gauss, Grid::uniform(0.0, 0.5 * mp.length, 100)),
                  InvalidArgument);
  const fixture::Matched osc(fixture::flame(), PulseMode::oscillatory);
  // l / lambda ~ 38 wavelengths; 400 intervals is ~10 nodes per wavelength.
  CHECK_THROWS_AS(build_motion_tables(osc.gauss, Grid::uniform(0.0, osc.length, 400)), ResolutionError);
  CHECK_NOTHROW(build_motion_tables(osc.gauss, Grid::uniform(0.0, osc.length, 1000)));
}

TEST_CASE("table invariants") {
  const auto& f = flame();
  for (const MotionTables* t : {&f.gauss, &f.poly}) {
    for (double uz : t->u_z_nodes()) CHECK(1.0 + uz >= 1.0);
    const auto y3 = t->y3_table().values();
    const auto v3 = t->v3_table().values();
    const auto bx = t->big_xi_table().values();
    CHECK(y3[0] == 0.0);
    for (std::size_t i = 1; i < y3.size(); ++i) {
      REQUIRE(y3[i] >= y3[i - 1]);
      REQUIRE(v3[i] >= v3[i - 1]);
      REQUIRE(bx[i] > bx[i - 1]);
    }
    for (std::size_t i = 1; i + 1 < v3.size(); ++i) {
      REQUIRE(v3[i + 1] - 2.0 * v3[i] + v3[i - 1] >= -1e-12 * v3.back());
    }
    CHECK(t->y3(-1.0) == 0.0);
  }
}

TEST_CASE("primitives match the closed form at every node") {
  const auto& f = flame();
  const auto y3 = f.poly.y3_table().values();
  const auto v3 = f.poly.v3_table().values();
  double worst = 0.0;
  for (std::size_t i = 0; i < y3.size(); ++i) {
    const auto c = polynomial_primitives_closed(f.mp.poly, f.mp.grid[i]);
    if (c.y3 > 0.0) worst = std::max({worst, rel(y3[i], c.y3), rel(v3[i], c.v3)});
  }
  CHECK(worst <= 1e-8);
  // Between nodes as well.
  for (double frac : {0.313, 0.5001, 0.77}) {
    const double xi = frac * f.mp.length;
    CHECK(rel(f.poly.v3(xi), polynomial_primitives_closed(f.mp.poly, xi).v3) <= 1e-10);
    CHECK(rel(f.poly.y3(xi), polynomial_primitives_closed(f.mp.poly, xi).y3) <= 1e-8);
  }
}

TEST_CASE("primitives at 1e5 nodes") {
  const auto& f = flame();
  const MotionTables fine = build_motion_tables(f.mp.poly, Grid::uniform(0.0, f.mp.length, 100000));
  double worst = 0.0;
  const auto y3 = fine.y3_table().values();
  for (std::size_t i = 0; i < y3.size(); ++i) {
    const auto c = polynomial_primitives_closed(f.mp.poly, fine.grid()[i]);
    if (c.y3 > 0.0) worst = std::max(worst, rel(y3[i], c.y3));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("V3 / Y3 < xi / 2 inside (0, l)") {
  const auto& f = flame();
  for (const MotionTables* t : {&f.gauss, &f.poly}) {
    const auto y3 = t->y3_table().values();
    const auto v3 = t->v3_table().values();
    for (std::size_t i = 0; i + 1 < y3.size(); ++i) {
      if (y3[i] > 0.0) REQUIRE(v3[i] < 0.5 * f.mp.grid[i] * y3[i]);
    }
  }
}

TEST_CASE("xi_of, trajectory and labels") {
  const auto& f = flame();
  const MotionTables& t = f.poly;
  CHECK(xi_of(t, 1e-3, 1e-3) == 0.0);
  CHECK(xi_of(t, 1e-4, 2e-3) == doctest::Approx(-1.9e-3));
  const Position before = trajectory_zero(t, 1e-3, {2e-3, {1e-5, 0.0}});
  CHECK(before.z == 2e-3);
  CHECK(before.perp.x == 1e-5);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uz(-f.mp.length, f.mp.length);
  std::uniform_real_distribution<double> ux(0.0, 3.0 * f.mp.length);
  for (int i = 0; i < 100; ++i) {
    const FluidLabel label{uz(rng), {3e-5, -1e-5}};
    const double x0 = label.z + ux(rng);
    CHECK(std::abs(t.big_xi(xi_of(t, x0, label.z)) - (x0 - label.z)) <= 1e-10);
    const Position p = trajectory_zero(t, x0, label);
    const FluidLabel back = label_from_position(t, x0, p.z, p.perp);
    CHECK(std::abs(back.z - label.z) <= 1e-10);
    CHECK((back.perp - label.perp).norm() <= 1e-10);
  }
  const FluidLabel ahead = label_from_position(t, 1e-3, 2e-3, {4e-5, 0.0});
  CHECK(ahead.z == 2e-3);
  CHECK(ahead.perp.x == 4e-5);
}

TEST_CASE("displacement at the peak equals zeta") {
  const auto& f = flame();
  const double x0 = f.poly.big_xi(f.mp.xi0);
  const double dz = trajectory_zero(f.poly, x0, {0.0, {}}).z;
  CHECK(dz == doctest::Approx(f.poly.y3(f.mp.xi0)).epsilon(1e-12));
  CHECK(dz == doctest::Approx(1.4e-3).epsilon(0.02));
  CHECK(dz == doctest::Approx(f.mp.m.zeta).epsilon(0.02));
  // Independent of Z at fixed phase.
  for (double z : {1e-3, 0.1, 2.0}) {
    const double d = trajectory_zero(f.poly, f.poly.big_xi(f.mp.xi0) + z, {z, {}}).z - z;
    CHECK(std::abs(d - dz) <= 1e-10);
  }
}

TEST_CASE("trajectory agrees with direct RK4 integration") {
  const auto& f = flame();
  for (const auto& [pulse, tables] : {std::pair{&f.mp.poly, &f.poly}, std::pair{&f.mp.gauss, &f.gauss}}) {
    for (double x0 : {0.4 * f.mp.length, 1.0 * f.mp.length, 2.5 * f.mp.length}) {
      const auto s = oracle::integrate_path(*pulse, 0.0, x0, 200000);
      CHECK(rel(trajectory_zero(*tables, x0, {0.0, {}}).z, s.z) <= 1e-6);
      CHECK(rel(proper_time(*tables, x0, 0.0), s.tau) <= 1e-6);
    }
  }
}

TEST_CASE("Lagrangian derivatives by finite differences") {
  const auto& f = flame();
  const double h = 1e-8;
  for (const MotionTables* t : {&f.gauss, &f.poly}) {
    for (int i = 1; i <= 20; ++i) {
      const double xi = f.mp.xi0 * (0.2 + 0.07 * i);
      const double z = 1e-3, x0 = z + xi;
      auto big_z = [&](double a, double b) { return label_from_position(*t, a, b).z; };
      const double dz = (big_z(x0, z + h) - big_z(x0, z - h)) / (2 * h);
      const double dt = (big_z(x0 + h, z) - big_z(x0 - h, z)) / (2 * h);
      CHECK(rel(dz, t->gamma(xi)) <= 1e-4);
      CHECK(std::abs(dt + t->u_z(xi)) / t->gamma(xi) <= 1e-4);
      // dz/dZ at fixed x0 lies in (0, 1].
      const double dzd = (trajectory_zero(*t, x0, {h, {}}).z - trajectory_zero(*t, x0, {-h, {}}).z) / (2 * h);
      CHECK(dzd > 0.0);
      CHECK(dzd <= 1.0 + 1e-6);
    }
  }
}

TEST_CASE("density") {
  const auto& f = flame();
  const double n0 = 1e18;
  CHECK(density_zero(f.poly, n0, 1e-3, 2e-3) == n0);
  CHECK(density_zero(f.poly, n0, 1e-3, -5e-4) == 0.0);
  // Vacuum gap behind the displaced surface.
  const double x0 = f.poly.big_xi(f.mp.xi0);
  CHECK(density_zero(f.poly, n0, x0, 0.5 * f.poly.y3(f.mp.xi0)) == 0.0);
  // Mass conservation in a slab.
  for (double t : {0.6, 1.0, 1.5}) {
    const double x0s = t * f.mp.length;
    const double m = oracle::slab_electrons(f.poly, n0, x0s, 2e-4, 1.2e-3, 4000);
    CHECK(rel(m, n0 * 1.0e-3) <= 1e-5);
  }
}

TEST_CASE("recover_from_s") {
  const Kinematics rest = recover_from_s({}, 1.0);
  CHECK(rest.gamma == 1.0);
  CHECK(rest.u_z == 0.0);
  CHECK(rest.beta_z == 0.0);
  const Vec2 u{0.3, -1.7};
  CHECK(recover_from_s(u, 1.0).u_z == doctest::Approx(0.5 * u.norm2()).epsilon(1e-15));
  CHECK_THROWS_AS(recover_from_s(u, 0.0), InvalidArgument);
  CHECK_THROWS_AS(recover_from_s(u, -1.0), InvalidArgument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> comp(-20.0, 20.0), ls(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 v{comp(rng), comp(rng)};
    const double s = std::exp(ls(rng));
    const Kinematics k = recover_from_s(v, s);
    CHECK(rel(k.gamma * k.gamma, 1.0 + v.norm2() + k.u_z * k.u_z) <= 1e-12);
    CHECK(std::abs(k.gamma - k.u_z - s) <= 1e-12 * k.gamma);
  }
  // |beta_perp| / beta_z = 2 / |u_perp| on the zero-density branch.
  for (double a : {1e-4, 0.3, 5.0, 60.0}) {
    const Kinematics k = recover_from_s({a, 0.0}, 1.0);
    CHECK(rel(k.beta_perp.norm() / k.beta_z, 2.0 / a) <= 1e-12);
  }
}

TEST_CASE("transverse fields") {
  const fixture::Matched osc(fixture::flame(), PulseMode::oscillatory);
  const TransverseFields none = transverse_fields(osc.gauss, 1e-3, 2e-3);
  CHECK(none.e.norm() == 0.0);
  CHECK(none.b.norm() == 0.0);
  for (int i = 1; i < 40; ++i) {
    const double xi = osc.length * i / 40.0;
    const TransverseFields f = transverse_fields(osc.gauss, xi + 1e-3, 1e-3);
    CHECK(f.b.norm() == doctest::Approx(f.e.norm()).epsilon(1e-15));
    CHECK(f.e.x * f.b.x + f.e.y * f.b.y == doctest::Approx(0.0).scale(f.e.norm2()));
  }
  // -int E dxi reproduces alpha_perp.
  const double xi = 0.43 * osc.length;
  const double ax = -oracle::gauss_legendre3(
      [&](double s) { return transverse_fields(osc.gauss, s, 0.0).e.x; }, 0.0, xi, 20000);
  const double ay = -oracle::gauss_legendre3(
      [&](double s) { return transverse_fields(osc.gauss, s, 0.0).e.y; }, 0.0, xi, 20000);
  const Vec2 a = vector_potential(osc.gauss, xi);
  // The truncated gaussian starts with a jump alpha(0+) at the front.
  const Vec2 a0 = vector_potential(osc.gauss, 1e-300);
  CHECK(((Vec2{ax, ay} + a0) - a).norm() <= 1e-6 * a.norm());
  const fixture::Matched circ(fixture::flame(1.0, Polarization::circular), PulseMode::oscillatory);
  const double axc = -oracle::gauss_legendre3(
      [&](double s) { return transverse_fields(circ.poly, s, 0.0).e.x; }, 0.0, xi, 20000);
  CHECK(std::abs(axc - vector_potential(circ.poly, xi).x) <= 1e-6 * vector_potential(circ.poly, xi).norm());
}

TEST_CASE("longitudinal field") {
  const auto& f = flame();
  const double n0 = 1e18;
  CHECK(longitudinal_field(n0, 1e-3, 2e-3, f.poly) == 0.0);
  CHECK(longitudinal_field(n0, 0.0, 5e-4, f.poly) == 0.0);
  CHECK(longitudinal_field(n0, 0.0, -5e-4, f.poly) == 0.0);
  const double x0 = 1.2 * f.mp.length, z = 2.5e-3;
  const double big_z = label_from_position(f.poly, x0, z).z;
  REQUIRE(big_z > 0.0);
  CHECK(longitudinal_field(n0, x0, z, f.poly) ==
        doctest::Approx(4.0 * cgs::pi * cgs::electron_charge * n0 * (z - big_z)).epsilon(1e-14));
}

TEST_CASE("trajectory CSV") {
  const auto& f = flame();
  std::vector<TrajectorySample> rows;
  for (int i = 0; i < 5; ++i) rows.push_back(trajectory_sample(f.poly, i * 1e-3, {0.0, {}}));
  std::ostringstream out;
  write_trajectory_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x0_cm,z_cm,xperp1_cm,xperp2_cm,gamma,uz");
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 5);
}
