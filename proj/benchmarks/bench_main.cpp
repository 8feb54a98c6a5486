#include <vector>

#include <benchmark/benchmark.h>

#include "dynsis/netgen.hpp"
#include "dynsis/ngm.hpp"
#include "dynsis/ode.hpp"
#include "dynsis/simulation.hpp"

using namespace dynsis;

namespace {

ModelParams endemic_params(int m) { return {0.5, 1.0, 0.05, 0.1, m, 1000}; }

StateVector start(int m) { return initial_state(DegreeDistribution::point_mass(4, m), 0.1, 1000); }

void BM_Rhs(benchmark::State& bench) {
  const int m = static_cast<int>(bench.range(0));
  const auto x = start(m);
  const auto p = endemic_params(m);
  std::vector<double> dxdt(x.values().size());
  for (auto _ : bench) {
    rhs_into(x.index(), p, x.values(), dxdt);
    benchmark::DoNotOptimize(dxdt.data());
  }
}
BENCHMARK(BM_Rhs)->Arg(4)->Arg(8)->Arg(20);

void BM_Integrate(benchmark::State& bench) {
  const auto x = start(20);
  const auto p = endemic_params(20);
  for (auto _ : bench) benchmark::DoNotOptimize(integrate(x, p, 100.0, 1.0).size());
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

void BM_R0(benchmark::State& bench) {
  const int m = static_cast<int>(bench.range(0));
  const auto dfe = dfe_from_distribution(DegreeDistribution::point_mass(6, m), 1000);
  const ModelParams p{0.35, 1.0, 0.1, 17.0 / 30.0, m, 1000};
  for (auto _ : bench) benchmark::DoNotOptimize(r0(dfe, p));
}
BENCHMARK(BM_R0)->Arg(8)->Arg(12)->Arg(20)->Unit(benchmark::kMicrosecond);

// Throughput of single Gillespie events near the endemic state.
void BM_SimulationEvents(benchmark::State& bench) {
  const auto p = endemic_params(20);
  SimState state(regular_random(1000, 4, 20, 7), seed_infection(1000, 100, 8));
  Rng rng(9);
  for (auto _ : bench) {
    if (!step(state, p, rng)) {
      bench.PauseTiming();
      state = SimState(regular_random(1000, 4, 20, 7), seed_infection(1000, 100, 8));
      bench.ResumeTiming();
    }
  }
  bench.SetItemsProcessed(bench.iterations());
}
BENCHMARK(BM_SimulationEvents);

}  // namespace
BENCHMARK_MAIN();
