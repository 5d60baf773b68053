#include <benchmark/benchmark.h>

#include <random>

#include "pfmc/conic/cones.hpp"

using namespace pfmc::conic;

static void PsdProjection(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  ConeLayout layout;
  layout.psd_dim = {d};
  ConeProjector proj(layout);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXd S(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) S(i, j) = S(j, i) = g(rng);
  Eigen::VectorXd base(svec_len(d));
  svec_pack(S, base.data());

  Eigen::VectorXd buf = base;
  for (auto _ : state) {
    buf = base;
    proj.project_primal(buf);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(PsdProjection)->Arg(5)->Arg(15)->Arg(50)->Arg(141)->Arg(145);

static void SocProjection(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Eigen::VectorXd base(len);
  for (int i = 0; i < len; ++i) base[i] = g(rng);
  Eigen::VectorXd buf = base;
  for (auto _ : state) {
    buf = base;
    soc_project(buf.data(), len);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(SocProjection)->Arg(16)->Arg(225);
