#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "pwave/cli.hpp"
#include "pwave/config.hpp"

using namespace pwave;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("pwave_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::vector<std::string>> csv_cells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream text("# comment\nenergy = 4e7\n\npolarization = circular  # trailing\n");
  const auto settings = parse_config_text(text);
  const RunConfig c = make_config(settings);
  CHECK(c.laser.energy == 4e7);
  CHECK(c.laser.polarization == Polarization::circular);

  CHECK_THROWS_AS(make_config({{"bogus", "1"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"energy", "abc"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"wavelength", "-1"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"polarization", "elliptic"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"n0", "1e18"}, {"k", "1e5"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"envelope", "sampled"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"x0_min", "1"}, {"x0_max", "0"}}), ConfigError);
  CHECK_THROWS_AS(make_config({{"grid_n", "0"}}), ConfigError);

  const RunConfig d = make_config({{"labels", "0, 1e-3,2e-3"}, {"turning", "fwhm"}, {"turning_value", "0.19"}});
  CHECK(d.labels == std::vector<double>{0.0, 1e-3, 2e-3});
  CHECK(d.scenario.turning.kind == TurningPolicy::Kind::fraction_of_fwhm);
  CHECK(d.scenario.turning.value == 0.19);
  CHECK(config_keys().size() == 24);
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == cli::usage);
  CHECK(run({"frobnicate"}).code == cli::usage);
  CHECK(run({"slingshot", "--no-such-flag", "1"}).code == cli::usage);
  CHECK(run({"slingshot", "--energy", "banana"}).code == cli::usage);
  write(scratch() / "empty.cfg", "");
  CHECK(run({"validate", "--config", (scratch() / "empty.cfg").string()}).code == cli::usage);
  write(scratch() / "comments.cfg", "# nothing here\n\n");
  CHECK(run({"slingshot", "--config", (scratch() / "comments.cfg").string()}).code == cli::usage);
  CHECK(run({"slingshot", "--config", (scratch() / "missing.cfg").string()}).code == cli::usage);
  CHECK(run({"tabulate"}).code == cli::usage);
  CHECK(run({"--help"}).code == cli::ok);
}

TEST_CASE("domain and io errors") {
  CHECK(run({"slingshot", "--energy", "0"}).code == cli::data_error);
  CHECK(run({"tabulate", "--out", "/nonexistent_dir/x.csv", "--grid-n", "2000"}).code == cli::io_error);
}

TEST_CASE("validate and the negative control") {
  const Result ok = run({"validate"});
  CHECK(ok.code == cli::ok);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const Result bad = run({"validate", "--inject_fault", "monotone"});
  CHECK(bad.code == cli::invariant_failure);
  CHECK(bad.out.find("FAIL Y3 nondecreasing") != std::string::npos);
}

TEST_CASE("slingshot strict mode") {
  CHECK(run({"slingshot"}).code == cli::ok);
  const Result dense = run({"slingshot", "--density", "1e20"});
  CHECK(dense.code == cli::ok);
  CHECK(dense.out.find("INVALID") != std::string::npos);
  CHECK(run({"slingshot", "--density", "1e20", "--strict"}).code == cli::strict_validity_failure);
  const fs::path kv = scratch() / "report.txt";
  CHECK(run({"slingshot", "--out", kv.string()}).code == cli::ok);
  CHECK(slurp(kv).find("exit.H = ") != std::string::npos);
}

TEST_CASE("tabulate with K = 0 gives T = 0") {
  const fs::path out = scratch() / "k0.csv";
  REQUIRE(run({"tabulate", "--k", "0", "--grid-n", "4000", "--out", out.string()}).code == cli::ok);
  for (const char* tag : {"k0.gaussian.csv", "k0.polynomial.csv"}) {
    const auto rows = csv_cells(slurp(scratch() / tag));
    REQUIRE(rows.size() == 4002);
    CHECK(rows[0].back() == "T");
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(std::stod(rows[i].back()) == 0.0);
  }
}

TEST_CASE("outputs are deterministic and round-trip at 15 digits") {
  const fs::path a = scratch() / "a.csv", b = scratch() / "b.csv";
  const std::vector<std::string> tab{"tabulate", "--grid-n", "4000", "--stride", "7"};
  auto with_out = [](std::vector<std::string> v, const fs::path& p) {
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(run(with_out(tab, a)).code == cli::ok);
  REQUIRE(run(with_out(tab, b)).code == cli::ok);
  const std::string ga = slurp(scratch() / "a.gaussian.csv");
  CHECK(!ga.empty());
  CHECK(ga == slurp(scratch() / "b.gaussian.csv"));
  CHECK(slurp(scratch() / "a.polynomial.csv") == slurp(scratch() / "b.polynomial.csv"));

  const std::vector<std::string> traj{"trajectory", "--labels", "0,1e-3", "--samples", "300",
                                      "--envelope", "gaussian"};
  const Result t1 = run(traj), t2 = run(traj);
  REQUIRE(t1.code == cli::ok);
  CHECK(t1.out == t2.out);

  for (const std::string* text : {&ga, &t1.out}) {
    const auto rows = csv_cells(*text);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      for (const auto& cell : rows[i]) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.15g", std::strtod(cell.c_str(), nullptr));
        REQUIRE(cell == buf);
      }
    }
  }
}

TEST_CASE("trajectory rows") {
  // Label ahead of the whole time range: untouched element.
  const Result far = run({"trajectory", "--labels", "1", "--x0_max", "0.5", "--samples", "20"});
  REQUIRE(far.code == cli::ok);
  const auto rows = csv_cells(far.out);
  CHECK(rows[0] == std::vector<std::string>{"x0_cm", "z_cm", "xperp1_cm", "xperp2_cm", "gamma", "uz"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == "1");
    CHECK(rows[i][4] == "1");
  }
  // Surface element: z nondecreasing, final displacement Y3(l).
  const Result surf = run({"trajectory", "--envelope", "polynomial", "--samples", "500"});
  const auto s = csv_cells(surf.out);
  double prev = -1.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double z = std::stod(s[i][1]);
    // z = x0 - Xi^-1(x0 - Z) rounds at the ulp of x0.
    CHECK(z >= prev - 4e-16 * std::abs(std::stod(s[i][0])));
    prev = z;
  }
  const fixture::Matched mp(fixture::flame());
  const MotionTables tp = build_motion_tables(mp.poly, GridOptions{});
  CHECK(fixture::rel(prev, tp.y3(support_end(mp.poly))) <= 1e-12);

  const Result y = run({"density-solve"});
  CHECK(y.code == cli::ok);
  CHECK(y.out.find("gaussian.K_xi0_sq = ") != std::string::npos);
}

TEST_CASE("sampled envelope through the CLI") {
  const fs::path env = scratch() / "env.csv";
  write(env, "xi_cm,w\n0,0\n5e-4,3\n1e-3,0\n");
  const Result r = run({"trajectory", "--envelope", "sampled", "--envelope_csv", env.string(),
                        "--samples", "50"});
  CHECK(r.code == cli::ok);
  write(env, "xi,w\n0,0\n");
  CHECK(run({"trajectory", "--envelope", "sampled", "--envelope_csv", env.string()}).code ==
        cli::data_error);
}
