#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pfmc/bench/runner.hpp"
#include "pfmc/models/extract.hpp"
#include "pfmc/net/ac_solver.hpp"

namespace pfmc::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::string status_of(const models::EstimationResult& est) { return conic::to_string(est.status); }

}  // namespace

BenchmarkRecord run_cell(const CaseBundle& bundle, const RunConfig& cfg, Method method, int d,
                         int nd_cap, std::uint64_t seed) {
  BenchmarkRecord rec;
  rec.case_name = bundle.name;
  rec.method = method;
  rec.fad = cfg.fad;
  rec.seed = seed;
  rec.k = cfg.k;
  rec.lambda = cfg.lambda;
  rec.d = d;

  const auto t0 = Clock::now();
  auto stamp = [&] {
    rec.wall_time_sec = std::chrono::duration<double>(Clock::now() - t0).count();
  };

  try {
    const meas::MeasurementMatrix m = meas::make_scenario(bundle.feeder, cfg.fad, seed, cfg.noise);
    const int n = m.n();
    const int nd = nd_cap > 0 ? nd_cap : n * meas::kColumns;
    rec.n_d = nd;

    models::ToleranceConfig tol;
    tol.loss = cfg.loss;

    std::optional<net::Complex> s0;
    if (cfg.use_slack_power) s0 = net::solve_ac_power_flow(bundle.feeder, bundle.part).s0;
    const models::SlackData slack =
        models::SlackData::from_partition(bundle.part, bundle.feeder.v0, s0);

    const double delta = cfg.delta.value_or(models::default_delta(m));
    rec.delta = delta;

    models::EstimationResult est;
    switch (method) {
      case Method::M1: {
        auto build = models::build_model_mcse(m, bundle.lpf, slack, tol, delta);
        est = models::extract_state(build, conic::solve(build.prog, cfg.solver), m);
        break;
      }
      case Method::M2: {
        auto build = models::build_model_projection(m, cfg.k, cfg.lambda);
        est = models::extract_state(build, conic::solve(build.prog, cfg.solver), m);
        break;
      }
      case Method::FullPsd: {
        auto build = models::build_model_pfpc(m, bundle.lpf, slack, cfg.k, cfg.lambda, tol);
        est = models::extract_state(build, conic::solve(build.prog, cfg.solver), m);
        break;
      }
      case Method::S1: {
        auto build = models::build_model_pfpc(m, bundle.lpf, slack, cfg.k, cfg.lambda, tol);
        auto plan =
            models::select_submatrices(m, bundle.feeder.load_adjacency(), d, nd, seed);
        build = models::apply_sparse_psd(std::move(build), plan);
        rec.n_d = plan.n_d();
        est = models::extract_state(build, conic::solve(build.prog, cfg.solver), m);
        break;
      }
      case Method::S2: {
        auto plan =
            models::select_submatrices(m, bundle.feeder.load_adjacency(), d, nd, seed);
        rec.n_d = plan.n_d();
        auto result = bnb::bnb_solve(m, bundle.lpf, slack, cfg.k, cfg.lambda, plan, tol, cfg.bnb,
                                     cfg.solver);
        est = result.estimate;
        rec.nodes = result.stats.nodes_explored;
        if (result.stats.bound_only) {
          stamp();
          rec.mape_vmag = est.mape_vmag;
          rec.mape_phase = est.mape_phase;
          rec.status = "bound-only";
          return rec;
        }
        break;
      }
    }
    stamp();
    rec.mape_vmag = est.mape_vmag;
    rec.mape_phase = est.mape_phase;
    rec.status = status_of(est);
  } catch (const std::exception& e) {
    stamp();
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

std::vector<BenchmarkRecord> run_benchmark(const RunConfig& cfg) {
  const CaseBundle bundle = resolve_case(cfg.case_ref);

  struct Cell {
    Method method;
    int d, nd;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const Method method : cfg.methods) {
    for (const int d : cfg.d_grid) {
      for (const int nd : cfg.nd_grid) {
        for (const std::uint64_t seed : cfg.seeds) cells.push_back({method, d, nd, seed});
      }
    }
  }

  std::vector<BenchmarkRecord> records(cells.size());
  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (size_t i = 0; i < cells.size(); ++i) {
      const Cell& c = cells[i];
      records[i] = run_cell(bundle, cfg, c.method, c.d, c.nd, c.seed);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        const Cell& c = cells[i];
        records[i] = run_cell(bundle, cfg, c.method, c.d, c.nd, c.seed);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Canonical record order keeps CSV output reproducible across worker counts.
  std::stable_sort(records.begin(), records.end(),
                   [](const BenchmarkRecord& a, const BenchmarkRecord& b) {
                     return std::tie(a.case_name, a.method, a.d, a.n_d, a.fad, a.seed) <
                            std::tie(b.case_name, b.method, b.d, b.n_d, b.fad, b.seed);
                   });
  return records;
}

std::vector<BenchmarkRecord> sweep_hyperparameters(const RunConfig& cfg) {
  RunConfig sweep = cfg;
  sweep.methods = {Method::S1};
  return run_benchmark(sweep);
}

}  // namespace pfmc::bench
