#include <benchmark/benchmark.h>

#include <random>

#include "pfmc/meas/measurement.hpp"
#include "pfmc/models/builders.hpp"
#include "pfmc/conic/solver.hpp"

using namespace pfmc;

namespace {

meas::MeasurementMatrix rank1_scenario(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd a(n), b(meas::kColumns);
  for (int i = 0; i < n; ++i) a[i] = g(rng);
  for (int j = 0; j < meas::kColumns; ++j) b[j] = g(rng);
  meas::MeasurementMatrix m;
  m.ground_truth = a * b.transpose();
  m.values = m.ground_truth;
  m.psi = meas::apply_fad_mask(n, 0.6, seed);
  return m;
}

}  // namespace

static void SolveNuclearCompletion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto m = rank1_scenario(n, 3);
  conic::SolveSettings s;
  s.feas_tol = 1e-6;
  s.gap_tol = 1e-6;
  for (auto _ : state) {
    auto build = models::build_model_mc(m);
    auto rep = conic::solve(build.prog, s);
    benchmark::DoNotOptimize(rep.objective);
  }
}
BENCHMARK(SolveNuclearCompletion)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BuildProjectionModel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto m = rank1_scenario(n, 4);
  for (auto _ : state) {
    auto build = models::build_model_projection(m, 1, 10.0);
    benchmark::DoNotOptimize(build.prog.num_scalar_vars());
  }
}
BENCHMARK(BuildProjectionModel)->Arg(20)->Arg(140)->Unit(benchmark::kMillisecond);
