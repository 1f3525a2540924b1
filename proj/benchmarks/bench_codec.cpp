#include <benchmark/benchmark.h>

#include <vector>

#include "pegasus/evasion.hpp"
#include "pegasus/rng.hpp"
#include "pegasus/union_codec.hpp"

using namespace pegasus;
using namespace pegasus::theory;

static void EvadingUnionConstruction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<double> pts(n);
  for (double& p : pts) p = rng.next_uniform();
  for (auto _ : state) {
    auto out = find_evading_union(pts);
    benchmark::DoNotOptimize(out.index);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(EvadingUnionConstruction)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void UnionCodecRoundTrip(benchmark::State& state) {
  for (auto _ : state) {
    for (int i = 1; i <= 64; ++i) {
      auto u = union_from_index(i);
      benchmark::DoNotOptimize(index_of_union(u));
    }
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(UnionCodecRoundTrip);

BENCHMARK_MAIN();
