#include <benchmark/benchmark.h>

#include "pdmosc/classical.hpp"
#include "pdmosc/numverify.hpp"
#include "pdmosc/spectrum.hpp"

namespace {

void BM_SpectrumTable(benchmark::State& state) {
  const pdmosc::ModelParams p(0.02, 1.0, 1.0, 3);
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pdmosc::spectrum_table(n_max, p));
  state.SetItemsProcessed(state.iterations() * (n_max + 1));
}
BENCHMARK(BM_SpectrumTable)->Arg(100)->Arg(2000)->Arg(100000);

void BM_EnergyImplicit(benchmark::State& state) {
  const pdmosc::ModelParams p(0.02, 1.0, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(pdmosc::energy_implicit(40, p, 1e-12));
}
BENCHMARK(BM_EnergyImplicit);

void BM_OracleLevels(benchmark::State& state) {
  const pdmosc::ModelParams p(0.02, 1.0, 1.0, 3);
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pdmosc::numverify::oracle_levels(p, l, 2));
}
BENCHMARK(BM_OracleLevels)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_IntegrateOrbit(benchmark::State& state) {
  const pdmosc::ModelParams p(0.1, 1.0, 1.0, 2);
  const pdmosc::PhaseState s0{{1.0, 0.0}, {0.2, 0.8}, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(pdmosc::integrate_orbit(s0, p, 100.0, 1e-10));
}
BENCHMARK(BM_IntegrateOrbit)->Unit(benchmark::kMillisecond);

void BM_ClosureCheck(benchmark::State& state) {
  const pdmosc::ModelParams p(0.1, 1.0, 1.0, 2);
  const pdmosc::PhaseState s0{{1.0, 0.0}, {0.2, 0.8}, 0.0};
  const auto traj = pdmosc::integrate_radial_periods(s0, p, 8.2, 1e-10);
  for (auto _ : state) benchmark::DoNotOptimize(pdmosc::closure_check(traj, 1e-6));
}
BENCHMARK(BM_ClosureCheck)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
