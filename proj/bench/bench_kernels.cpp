#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

#include "chameleon/interferometry.hpp"
#include "chameleon/microstructure.hpp"
#include "chameleon/pde.hpp"

using namespace chameleon;

namespace {

constexpr double kBox = 0.01;

pde::Grid2D nuclei_box(const ChameleonParams& p, int nodes) {
  auto g = pde::initial_grid(p, nodes, nodes, kBox / (nodes - 1));
  return pde::add_nuclei(std::move(g),
                         {{0.5 * kBox, 0.5 * kBox}, {0.3 * kBox, 0.3 * kBox}, {0.7 * kBox, 0.3 * kBox},
                          {0.3 * kBox, 0.7 * kBox}, {0.7 * kBox, 0.7 * kBox}},
                         units::GasSpec{}.nucleus_mass);
}

// range(0): nodes per side, range(1): threads
void relax(benchmark::State& state, pde::Sweep sweep) {
  const ChameleonParams p(2, 1e19);
  const auto grid = nuclei_box(p, static_cast<int>(state.range(0)));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  pde::SolveOptions o;
  o.sweep = sweep;
  long iterations = 0;
  for (auto _ : state) {
    auto r = pde::solve_box(p, grid, o);
    iterations = r.report.iterations;
    benchmark::DoNotOptimize(r.grid.values.data());
  }
  state.counters["sweeps"] = static_cast<double>(iterations);
}

void BM_RelaxSerial(benchmark::State& state) { relax(state, pde::Sweep::lexicographic); }
void BM_RelaxRedBlack(benchmark::State& state) { relax(state, pde::Sweep::red_black); }

void BM_PressureSweep(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  std::vector<double> ps{0.0};
  for (int i = 0; i < 200; ++i) ps.push_back(std::pow(10.0, -6.0 + 8.0 * i / 199));
  const ChameleonParams p(2, 1e9);
  for (auto _ : state) {
    auto rows = interf::pressure_sweep(p, units::GasSpec::helium(0.0),
                                       bubble::CellGeometry::from_gap_cm(1.0), interf::BeamSpec{}, ps);
    benchmark::DoNotOptimize(rows.data());
  }
}

void BM_RegimeMap(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  std::vector<double> betas, ps;
  for (int i = 0; i < 400; ++i) {
    betas.push_back(std::pow(10.0, 12.0 * i / 399));
    ps.push_back(std::pow(10.0, -6.0 + 9.0 * i / 399));
  }
  for (auto _ : state) {
    auto cells = micro::regime_map(2, 2.4e-3, betas, ps, units::GasSpec::helium(0.0));
    benchmark::DoNotOptimize(cells.data());
  }
}

void thread_args(benchmark::internal::Benchmark* b) {
  const int max = omp_get_max_threads();
  for (int t = 1; t <= max; t *= 2) b->Arg(t);
  if ((max & (max - 1)) != 0) b->Arg(max);
}

void grid_args(benchmark::internal::Benchmark* b, bool threaded) {
  const int max = omp_get_max_threads();
  for (int n : {65, 129, 257}) {
    b->Args({n, 1});
    if (threaded && max > 1) b->Args({n, max});
  }
}

}  // namespace

BENCHMARK(BM_RelaxSerial)->Apply([](auto* b) { grid_args(b, false); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelaxRedBlack)->Apply([](auto* b) { grid_args(b, true); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PressureSweep)->Apply(thread_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegimeMap)->Apply(thread_args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
