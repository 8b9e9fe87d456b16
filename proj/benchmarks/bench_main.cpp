#include <benchmark/benchmark.h>

#include "wqed/analysis.hpp"
#include "wqed/lattice.hpp"
#include "wqed/spectral.hpp"
#include "wqed/two_atom.hpp"

namespace {

using namespace wqed;

void BM_DarkStateEvolution(benchmark::State& state) {
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const double t_max = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto traj = twoatom::evolve_dark_state(p, t_max, 1e-3);
    benchmark::DoNotOptimize(traj.population.back());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(t_max / 1e-3));
}
BENCHMARK(BM_DarkStateEvolution)->Arg(4)->Arg(8)->Arg(16);

void BM_SeriesSolution(benchmark::State& state) {
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(twoatom::series_solution(p, t));
}
BENCHMARK(BM_SeriesSolution)->Arg(8)->Arg(32);

void BM_CharacteristicRoots(benchmark::State& state) {
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(spectral::characteristic_roots(p, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CharacteristicRoots)->Arg(1)->Arg(5)->Arg(11);

void BM_FieldMapRow(benchmark::State& state) {
  const auto p = twoatom::TwoAtomParams::make(1.0, 0.5, 1.0);
  const auto traj = twoatom::evolve_dark_state(p, 4.0, 1e-3);
  const auto x_grid = twoatom::default_field_x_grid(p);
  for (auto _ : state) {
    double acc = 0.0;
    for (double x : x_grid) acc += twoatom::field_intensity(p, traj, x, 3.0);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(x_grid.size()));
}
BENCHMARK(BM_FieldMapRow);

void BM_LatticeEvolve(benchmark::State& state) {
  const double t_max = static_cast<double>(state.range(0));
  const auto p = lattice::CavityParams::resonant_pair(1.0, 10, t_max, 0.2, 2.0, 1, 1, 0.05);
  for (auto _ : state) {
    auto traj = lattice::evolve(p, lattice::InitialState::single_atom(), t_max, 0.01, 100);
    benchmark::DoNotOptimize(traj.states(0, traj.states.cols() - 1));
  }
  state.counters["sites"] = p.n_sites;
}
BENCHMARK(BM_LatticeEvolve)->Arg(10)->Arg(40)->Arg(80);

void BM_ExactDiagOracle(benchmark::State& state) {
  const auto p = lattice::CavityParams::resonant_pair(1.0, 10, 40.0, 0.2, 2.0, 1, 1, 0.05);
  std::vector<double> times{0.0, 10.0, 20.0, 40.0};
  for (auto _ : state) {
    auto traj = lattice::exact_diag_oracle(p, lattice::InitialState::single_atom(), times);
    benchmark::DoNotOptimize(traj.states(0, 0));
  }
  state.counters["dim"] = p.dimension();
}
BENCHMARK(BM_ExactDiagOracle);

}  // namespace

BENCHMARK_MAIN();
