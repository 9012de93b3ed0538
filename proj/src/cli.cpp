#include "pwave/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "pwave/config.hpp"
#include "pwave/correction.hpp"
#include "pwave/errors.hpp"
#include "pwave/invariants.hpp"
#include "pwave/kernels.hpp"
#include "pwave/kinematics.hpp"
#include "pwave/slingshot.hpp"

namespace pwave::cli {

namespace {

namespace fs = std::filesystem;

struct IoError : Error {
  using Error::Error;
};

// Options shared by all commands.
struct Common {
  std::string config_path;
  std::string out_path;
  bool strict = false;
  std::map<std::string, std::string> flags;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

RunConfig load(const Common& c) {
  std::map<std::string, std::string> settings;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw ConfigError("cannot open config file " + c.config_path);
    settings = parse_config_text(in);
    if (settings.empty()) throw ConfigError("config file " + c.config_path + " sets no keys");
  }
  for (const auto& [k, v] : c.flags) settings[k] = v;
  return make_config(settings);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

void finish(std::ofstream& f, const fs::path& path) {
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

fs::path with_tag(const fs::path& path, const std::string& tag) {
  fs::path p = path;
  const std::string ext = p.extension().string();
  p.replace_extension();
  return fs::path(p.string() + "." + tag + ext);
}

struct Matched {
  MatchedPulse m;
  double length;
  double xi0;
  PulseSpec gauss;
  PulseSpec poly;
  Grid grid;
};

Matched matched_pulses(const RunConfig& c, PulseMode mode = PulseMode::averaged) {
  const MatchedPulse m = match_pulse_parameters(c.laser);
  const double l = ionization_length(m.a_g, m.sigma, c.scenario.ionization_ev,
                                     m.polarization_factor);
  LaserSpec tab = c.laser;
  if (c.scenario.tabulation_polarization) tab.polarization = *c.scenario.tabulation_polarization;
  PulseSpec g = gaussian_pulse(m, tab, l, mode);
  PulseSpec p = polynomial_pulse(m, tab, 0.5 * l, mode);
  const double end = std::max(support_end(g), support_end(p));
  return {m, l, 0.5 * l, g, p, Grid::uniform(0.0, end, c.scenario.grid_intervals)};
}

int cmd_tabulate(const Common& common, std::ostream& out) {
  const RunConfig c = load(common);
  if (common.out_path.empty()) throw ConfigError("tabulate needs --out <path>");
  const Matched mp = matched_pulses(c);
  const double xi1 = mp.xi0 + c.scenario.turning.offset(mp.m, c.laser);
  for (const auto& [tag, pulse] : {std::pair{"gaussian", &mp.gauss}, std::pair{"polynomial", &mp.poly}}) {
    const MotionTables tables = build_motion_tables(*pulse, mp.grid);
    PlasmaSpec plasma;
    if (c.n0) {
      plasma = PlasmaSpec::from_density(*c.n0);
    } else if (c.k) {
      plasma = PlasmaSpec::from_k(*c.k);
    } else if (c.k_xi0_sq) {
      plasma = PlasmaSpec::from_k(*c.k_xi0_sq / (mp.xi0 * mp.xi0));
    } else {
      plasma = solve_density_for_turning(tables, xi1);
    }
    const FirstOrderTables fo = build_first_order(tables, plasma);
    const fs::path path = with_tag(common.out_path, tag);
    std::ofstream f = open_out(path);
    write_curves_csv(f, tables, fo, c.stride);
    finish(f, path);
    out << tag << ": K = " << num(plasma.k) << " cm^-2, n0 = " << num(plasma.n0)
        << " cm^-3, T(xi0) = " << num(fo.t(mp.xi0)) << ", wrote " << path.string() << "\n";
  }
  return ok;
}

int cmd_trajectory(const Common& common, std::ostream& out) {
  const RunConfig c = load(common);
  PulseSpec pulse;
  if (c.envelope == EnvelopeChoice::sampled) {
    pulse.polarization = c.laser.polarization;
    pulse.wavelength = c.laser.wavelength;
    pulse.mode = c.mode;
    pulse.envelope = SampledEnvelope::read_csv(fs::path(c.envelope_csv));
  } else {
    const Matched mp = matched_pulses(c, c.mode);
    pulse = c.envelope == EnvelopeChoice::gaussian ? mp.gauss : mp.poly;
  }
  const MotionTables tables = build_motion_tables(
      pulse, GridOptions{c.scenario.grid_intervals, std::nullopt, std::nullopt});
  const double zmin = *std::min_element(c.labels.begin(), c.labels.end());
  const double zmax = *std::max_element(c.labels.begin(), c.labels.end());
  const double end = support_end(pulse);
  const double x0_min = c.x0_min.value_or(std::min(0.0, zmin));
  const double x0_max = c.x0_max.value_or(zmax + 2.0 * (end + tables.y3(end)));
  if (!(x0_max > x0_min)) throw ConfigError("empty time range");

  std::vector<double> x0;
  std::vector<FluidLabel> labels;
  for (double z : c.labels) {
    for (std::size_t i = 0; i < c.samples; ++i) {
      const double t = c.samples == 1 ? 0.0 : static_cast<double>(i) / (c.samples - 1);
      x0.push_back(x0_min + t * (x0_max - x0_min));
      labels.push_back({z, {}});
    }
  }
  const auto rows = kernels::trajectory_batch_parallel(tables, x0, labels);
  if (common.out_path.empty()) {
    write_trajectory_csv(out, rows);
  } else {
    std::ofstream f = open_out(common.out_path);
    write_trajectory_csv(f, rows);
    finish(f, common.out_path);
    out << "wrote " << rows.size() << " rows to " << common.out_path << "\n";
  }
  return ok;
}

int cmd_slingshot(const Common& common, std::ostream& out) {
  const RunConfig c = load(common);
  const SlingshotReport r = run_scenario(c.laser, c.scenario);
  write_report_text(out, r);
  if (!common.out_path.empty()) {
    std::ofstream f = open_out(common.out_path);
    write_report_keyvalue(f, r);
    finish(f, common.out_path);
  }
  return (common.strict && !r.valid) ? strict_validity_failure : ok;
}

int cmd_density_solve(const Common& common, std::ostream& out) {
  const RunConfig c = load(common);
  const Matched mp = matched_pulses(c);
  const double xi1 = mp.xi0 + c.scenario.turning.offset(mp.m, c.laser);
  std::ostringstream s;
  s << "xi0 = " << num(mp.xi0) << "  # cm\n";
  s << "xi1 = " << num(xi1) << "  # cm\n";
  for (const auto& [tag, pulse] : {std::pair{"gaussian", &mp.gauss}, std::pair{"polynomial", &mp.poly}}) {
    const MotionTables tables = build_motion_tables(*pulse, mp.grid);
    const PlasmaSpec plasma = solve_density_for_turning(tables, xi1);
    const std::string t = tag;
    s << t << ".K = " << num(plasma.k) << "  # cm^-2\n";
    s << t << ".K_xi0_sq = " << num(plasma.k * mp.xi0 * mp.xi0) << "\n";
    s << t << ".n0 = " << num(plasma.n0) << "  # cm^-3\n";
  }
  if (common.out_path.empty()) {
    out << s.str();
  } else {
    std::ofstream f = open_out(common.out_path);
    f << s.str();
    finish(f, common.out_path);
  }
  return ok;
}

int cmd_validate(const Common& common, std::ostream& out) {
  const RunConfig c = load(common);
  const auto results = run_invariant_suite(c);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << ": " << r.detail;
    out << "\n";
    if (!r.passed) ++failed;
  }
  out << results.size() - failed << "/" << results.size() << " invariants hold\n";
  return failed == 0 ? ok : invariant_failure;
}

std::string key_help() {
  std::string s =
      "Configuration keys (file lines `key = value`, or `--key value`; flags override the file).\n"
      "Units: lengths cm, densities cm^-3, energies erg in, MeV in reports.\n";
  for (const auto& k : config_keys()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-24s %s\n", k.name, k.help);
    s += buf;
  }
  s += "Exit codes: 0 ok, 1 invariant failure, 2 invalid scenario with --strict, 64 usage,\n"
       "            65 input outside the model's domain, 74 I/O failure.\n";
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plane-wave laser-plasma kinematics and slingshot estimates", "pwave"};
  app.footer(key_help());
  app.require_subcommand(1);

  Common common;
  using Handler = int (*)(const Common&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"tabulate", "write first-order curves of both matched envelopes (CSV)", cmd_tabulate},
      {"trajectory", "sample zero-density trajectories (CSV)", cmd_trajectory},
      {"slingshot", "full scenario report", cmd_slingshot},
      {"density-solve", "plasma density for the chosen turning point", cmd_density_solve},
      {"validate", "run the invariant suite", cmd_validate},
  };
  std::map<std::string, std::string> raw;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config_path, "configuration file");
    sub->add_option("--out", common.out_path, "output path");
    sub->add_flag("--strict", common.strict, "exit 2 when the scenario is invalid");
    for (const auto& k : config_keys()) {
      std::string flag = "--" + std::string(k.name);
      if (std::string(k.name) == "grid_n") flag = "--grid-n,--grid_n";
      sub->add_option_function<std::string>(
          flag, [&raw, key = std::string(k.name)](const std::string& v) { raw[key] = v; }, k.help);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }
  common.flags = raw;

  for (const auto& [name, help, fn] : commands) {
    if (!app.got_subcommand(name)) continue;
    try {
      return fn(common, out);
    } catch (const ConfigError& e) {
      err << "pwave " << name << ": " << e.what() << "\n";
      return usage;
    } catch (const IoError& e) {
      err << "pwave " << name << ": " << e.what() << "\n";
      return io_error;
    } catch (const Error& e) {
      err << "pwave " << name << ": " << e.what() << "\n";
      return data_error;
    }
  }
  return usage;
}

}  // namespace pwave::cli
