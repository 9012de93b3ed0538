// Serial reference vs OpenMP kernels on the nu=1 FLAME-class pulse.

#include <benchmark/benchmark.h>

#include <deque>
#include <vector>

#include "pwave/correction.hpp"
#include "pwave/kernels.hpp"
#include "pwave/slingshot.hpp"

namespace {

using namespace pwave;

struct Setup {
  PulseSpec pulse;
  Grid grid;
  MotionTables tables;
  double k;
  std::vector<double> x0, xi, xi_minus;
  std::vector<FluidLabel> labels;
};

Setup make_setup(std::size_t intervals, PulseMode mode) {
  const LaserSpec laser{5e7, 8e-5, 7.5e-4, Polarization::linear, 1.0};
  const MatchedPulse m = match_pulse_parameters(laser);
  const double l = ionization_length(m.a_g, m.sigma, 24.0, m.polarization_factor);
  PulseSpec pulse = polynomial_pulse(m, laser, 0.5 * l, mode);
  Grid grid = Grid::uniform(0.0, l, intervals);
  MotionTables tables = build_motion_tables(pulse, grid);
  const double k = solve_density_for_turning(tables, 0.5 * l + 0.05 * m.l_p).k;
  Setup s{pulse, grid, std::move(tables), k, {}, {}, {}, {}};
  for (std::size_t i = 0; i < intervals; ++i) {
    const double t = (i + 0.5) / intervals;
    s.x0.push_back(2.0 * l * t);
    s.labels.push_back({1e-4 * (i % 7), {}});
    s.xi.push_back(0.5 * l * t);
    s.xi_minus.push_back(l * (1.0 - t));
  }
  return s;
}

const Setup& setup(std::size_t intervals, PulseMode mode = PulseMode::averaged) {
  static std::deque<std::pair<std::pair<std::size_t, PulseMode>, Setup>> cache;
  for (const auto& [key, s] : cache)
    if (key.first == intervals && key.second == mode) return s;
  cache.emplace_back(std::pair{intervals, mode}, make_setup(intervals, mode));
  return cache.back().second;
}

template <auto Kernel>
void sample_pulse(benchmark::State& state) {
  const Setup& s = setup(state.range(0), PulseMode::oscillatory);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.pulse, s.grid));
  state.SetItemsProcessed(state.iterations() * s.grid.size());
}

template <auto Kernel>
void interval_integrals(benchmark::State& state) {
  const Setup& s = setup(state.range(0), PulseMode::oscillatory);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.pulse, s.grid));
  state.SetItemsProcessed(state.iterations() * s.grid.size());
}

template <auto Kernel>
void trajectory_batch(benchmark::State& state) {
  const Setup& s = setup(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.tables, s.x0, s.labels));
  state.SetItemsProcessed(state.iterations() * s.x0.size());
}

template <auto Kernel>
void first_order_nodes(benchmark::State& state) {
  const Setup& s = setup(state.range(0));
  const auto uz = s.tables.u_z_nodes();
  const auto v3 = s.tables.v3_table().values();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(uz, v3, s.k));
  state.SetItemsProcessed(state.iterations() * uz.size());
}

template <auto Kernel>
void g_integrals(benchmark::State& state) {
  const Setup& s = setup(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.tables, s.k));
  state.SetItemsProcessed(state.iterations() * s.grid.size());
}

template <auto Kernel>
void bound_ratios(benchmark::State& state) {
  const Setup& s = setup(state.range(0), PulseMode::oscillatory);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s.tables, s.k, s.xi, s.xi_minus));
  state.SetItemsProcessed(state.iterations() * s.xi.size());
}

namespace kn = pwave::kernels;

#define PWAVE_PAIR(name)                                                                   \
  BENCHMARK(name<kn::name##_serial>)->Name(#name "/serial")->Arg(20000)->Arg(200000)->UseRealTime(); \
  BENCHMARK(name<kn::name##_parallel>)->Name(#name "/parallel")->Arg(20000)->Arg(200000)->UseRealTime()

PWAVE_PAIR(sample_pulse);
PWAVE_PAIR(interval_integrals);
PWAVE_PAIR(trajectory_batch);
PWAVE_PAIR(first_order_nodes);
PWAVE_PAIR(g_integrals);
PWAVE_PAIR(bound_ratios);

}  // namespace

BENCHMARK_MAIN();
