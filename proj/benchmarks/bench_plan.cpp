#include <benchmark/benchmark.h>

#include "pfmc/meas/measurement.hpp"
#include "pfmc/models/submatrix.hpp"
#include "pfmc/net/feeder_gen.hpp"

using namespace pfmc;

static void SelectSubmatrices(benchmark::State& state) {
  const int buses = static_cast<int>(state.range(0));
  auto feeder = net::make_radial_feeder(buses, 7);
  auto m = meas::make_scenario(feeder, 0.32, 1);
  const auto adj = feeder.load_adjacency();
  for (auto _ : state) {
    auto plan = models::select_submatrices(m, adj, 5, 700, 1);
    benchmark::DoNotOptimize(plan.n_d());
  }
}
BENCHMARK(SelectSubmatrices)->Arg(141)->Arg(533)->Unit(benchmark::kMillisecond);
