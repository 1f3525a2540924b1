#include <benchmark/benchmark.h>

#include <vector>

#include "pegasus/bicycle.hpp"
#include "pegasus/grid_experiment.hpp"
#include "pegasus/gridworld.hpp"
#include "pegasus/sim_model.hpp"

using namespace pegasus;

static void GridRolloutGeneric(benchmark::State& state) {
  const auto model = grid::build_gridworld();
  const auto scenarios = draw_scenarios(model, 16, 100, 1);
  const auto pol = grid::policy_from_index(23456);
  grid::GridPolicyFn fn{&pol};
  for (auto _ : state) {
    auto est = estimate_value(model, fn, scenarios, 100);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(state.iterations() * 16 * 100);
}
BENCHMARK(GridRolloutGeneric);

static void GridSweepAllPolicies(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto model = grid::build_gridworld();
  const auto scenarios = draw_scenarios(model, m, 100, 1);
  std::vector<double> noise;
  for (const auto& sc : scenarios)
    for (double v : sc.noise) noise.push_back(v);
  for (auto _ : state) {
    auto vhat = grid::sweep_all_policies(noise, m, 100, 0.99, grid::Variant::Normal, 0);
    benchmark::DoNotOptimize(vhat.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m) * 65536);
}
BENCHMARK(GridSweepAllPolicies)->Arg(1)->Arg(10)->Arg(100);

static void GridExactPolicyValues(benchmark::State& state) {
  for (auto _ : state) {
    auto values = grid::exact_policy_values(0.99, 1);
    benchmark::DoNotOptimize(values.data());
  }
  state.SetItemsProcessed(state.iterations() * 65536);
}
BENCHMARK(GridExactPolicyValues)->Unit(benchmark::kMillisecond);

static void BikeStep(benchmark::State& state) {
  bike::BikeState s;
  s.omega = 0.01;
  s.theta = 0.05;
  const bike::BikeAction a{0.4, 0.004};
  for (auto _ : state) {
    s = bike::bike_step(s, a, 0.37, 0.01, 0.02);
    if (s.fallen) s = bike::BikeState{};
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BikeStep);

BENCHMARK_MAIN();
