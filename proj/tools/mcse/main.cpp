#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "pfmc/bench/runner.hpp"
#include "pfmc/bnb/bnb.hpp"
#include "pfmc/models/extract.hpp"
#include "pfmc/net/ac_solver.hpp"
#include "pfmc/net/feeder_gen.hpp"

namespace {

using namespace pfmc;

int cmd_estimate(const std::string& case_ref, const std::string& method_str, double fad,
                 std::uint64_t seed, int k, double lambda, int d, int nd, double delta,
                 double noise_v, double noise_s, const std::string& loss_str,
                 const std::string& dump_model, const std::string& trace_path, long max_nodes,
                 double time_limit, double gap, double feas_tol, double gap_tol, bool no_s0,
                 bool json_out) {
  bench::RunConfig cfg;
  cfg.case_ref = case_ref;
  cfg.fad = fad;
  cfg.seeds = {seed};
  cfg.k = k;
  cfg.lambda = lambda;
  cfg.d_grid = {d};
  cfg.nd_grid = {nd};
  if (delta >= 0.0) cfg.delta = delta;
  cfg.noise.magnitude = noise_v;
  cfg.noise.power = noise_s;
  cfg.loss = loss_str == "squared-l2" ? models::Loss::SquaredL2 : models::Loss::L1;
  cfg.use_slack_power = !no_s0;
  cfg.solver.feas_tol = feas_tol;
  cfg.solver.gap_tol = gap_tol;
  cfg.bnb.max_nodes = max_nodes;
  cfg.bnb.time_limit_sec = time_limit;
  cfg.bnb.gap_tol = gap;

  const bench::Method method = bench::method_from_string(method_str);
  const bench::CaseBundle bundle = bench::resolve_case(case_ref);

  if (!dump_model.empty()) {
    const meas::MeasurementMatrix m = meas::make_scenario(bundle.feeder, fad, seed, cfg.noise);
    models::ToleranceConfig tol;
    tol.loss = cfg.loss;
    std::optional<net::Complex> s0;
    if (cfg.use_slack_power) s0 = net::solve_ac_power_flow(bundle.feeder, bundle.part).s0;
    const auto slack = models::SlackData::from_partition(bundle.part, bundle.feeder.v0, s0);
    models::ModelBuild build;
    switch (method) {
      case bench::Method::M1:
        build = models::build_model_mcse(m, bundle.lpf, slack, tol,
                                         cfg.delta.value_or(models::default_delta(m)));
        break;
      case bench::Method::M2:
        build = models::build_model_projection(m, k, lambda);
        break;
      default: {
        build = models::build_model_pfpc(m, bundle.lpf, slack, k, lambda, tol);
        if (method == bench::Method::S1 || method == bench::Method::S2) {
          auto plan = models::select_submatrices(
              m, bundle.feeder.load_adjacency(), d, nd > 0 ? nd : m.n() * meas::kColumns, seed);
          build = models::apply_sparse_psd(std::move(build), plan);
        }
        break;
      }
    }
    std::ofstream f(dump_model);
    f << build.prog.to_json();
    std::cerr << "model written to " << dump_model << "\n";
  }

  bench::BenchmarkRecord rec;
  if (method == bench::Method::S2 && !trace_path.empty()) {
    // run with a trace stream
    const meas::MeasurementMatrix m = meas::make_scenario(bundle.feeder, fad, seed, cfg.noise);
    models::ToleranceConfig tol;
    tol.loss = cfg.loss;
    std::optional<net::Complex> s0;
    if (cfg.use_slack_power) s0 = net::solve_ac_power_flow(bundle.feeder, bundle.part).s0;
    const auto slack = models::SlackData::from_partition(bundle.part, bundle.feeder.v0, s0);
    auto plan = models::select_submatrices(m, bundle.feeder.load_adjacency(), d,
                                           nd > 0 ? nd : m.n() * meas::kColumns, seed);
    std::ofstream tf(trace_path);
    auto sink = [&tf](const bnb::NodeTrace& t) {
      nlohmann::json j{{"node", t.id},       {"depth", t.depth},   {"bound", t.bound},
                       {"residual", t.residual}, {"action", t.action}};
      tf << j.dump() << "\n";
    };
    auto result = bnb::bnb_solve(m, bundle.lpf, slack, k, lambda, plan, tol, cfg.bnb, cfg.solver,
                                 sink);
    rec.case_name = bundle.name;
    rec.method = method;
    rec.fad = fad;
    rec.seed = seed;
    rec.k = k;
    rec.lambda = lambda;
    rec.d = d;
    rec.n_d = plan.n_d();
    rec.mape_vmag = result.estimate.mape_vmag;
    rec.mape_phase = result.estimate.mape_phase;
    rec.status = result.stats.bound_only ? "bound-only" : conic::to_string(result.estimate.status);
    rec.nodes = result.stats.nodes_explored;
    rec.wall_time_sec = result.stats.wall_time_sec;
  } else {
    rec = bench::run_cell(bundle, cfg, method, d, nd, seed);
  }

  if (json_out) {
    nlohmann::json j{{"case", rec.case_name},
                     {"method", bench::to_string(rec.method)},
                     {"fad", rec.fad},
                     {"seed", rec.seed},
                     {"k", rec.k},
                     {"lambda", rec.lambda},
                     {"d", rec.d},
                     {"n_d", rec.n_d},
                     {"delta", rec.delta},
                     {"mape_vmag_pct", rec.mape_vmag},
                     {"mape_phase_pct", rec.mape_phase},
                     {"time_sec", rec.wall_time_sec},
                     {"status", rec.status},
                     {"nodes", rec.nodes}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "case=" << rec.case_name << " method=" << bench::to_string(rec.method)
              << " fad=" << rec.fad << " seed=" << rec.seed << " status=" << rec.status
              << " MAPE(|v|)=" << rec.mape_vmag << "% time=" << rec.wall_time_sec << "s";
    if (rec.method == bench::Method::S2) std::cout << " nodes=" << rec.nodes;
    std::cout << "\n";
  }
  return rec.status == "optimal" || rec.status == "bound-only" ? 0 : 1;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_override, bool sweep) {
  bench::RunConfig cfg = bench::RunConfig::from_json_file(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;

  const auto records = sweep ? bench::sweep_hyperparameters(cfg) : bench::run_benchmark(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  bench::write_csv(records, cfg.out_dir + "/records.csv");
  const auto summary = bench::summarize(records);
  {
    std::ofstream f(cfg.out_dir + "/summary.md");
    f << summary.markdown;
  }
  {
    std::ofstream f(cfg.out_dir + "/summary.csv");
    f << summary.csv;
  }
  std::cout << summary.text;
  std::cout << "records: " << records.size() << " -> " << cfg.out_dir << "/records.csv\n";
  return 0;
}

int cmd_gencase(int buses, std::uint64_t seed, const std::string& out) {
  const net::NetworkCase c = net::make_radial_feeder(buses, seed);
  if (out.empty()) {
    std::cout << net::write_case(c);
  } else {
    std::ofstream f(out);
    f << net::write_case(c);
    std::cerr << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-flow-embedded projection conic matrix completion state estimator"};
  app.require_subcommand(1);

  // estimate
  std::string case_ref, method = "s1", loss = "l1", dump_model, trace_path;
  double fad = 0.32, lambda = 10.0, delta = -1.0, noise_v = 0.001, noise_s = 0.01;
  double time_limit = 600.0, gap = 1e-3, feas_tol = 1e-6, gap_tol = 1e-6;
  std::uint64_t seed = 1;
  int k = 1, d = 5, nd = 0;
  long max_nodes = 50;
  bool no_s0 = false, json_out = false;

  auto* est = app.add_subcommand("estimate", "solve one state-estimation scenario");
  est->add_option("--case", case_ref, "case file path or synthetic:<buses>:<seed>")->required();
  est->add_option("--method", method, "m1|m2|s1|s2|full");
  est->add_option("--fad", fad, "fraction of available data in (0,1]");
  est->add_option("--seed", seed, "scenario seed");
  est->add_option("--k", k, "rank cap (1..5)");
  est->add_option("--lambda", lambda, "trace regularization weight");
  est->add_option("--d", d, "principal submatrix size");
  est->add_option("--nd", nd, "submatrix count cap (0 = one per matrix entry)");
  est->add_option("--delta", delta, "noise ball radius (<0 = auto)");
  est->add_option("--noise-v", noise_v, "relative std of |v| measurements");
  est->add_option("--noise-s", noise_s, "relative std of power measurements");
  est->add_option("--loss", loss, "tolerance loss: l1 | squared-l2");
  est->add_option("--dump-model", dump_model, "write the conic program as JSON");
  est->add_option("--trace", trace_path, "write the S2 search trace as JSON lines");
  est->add_option("--max-nodes", max_nodes, "S2 node budget");
  est->add_option("--time-limit", time_limit, "S2 time limit in seconds");
  est->add_option("--gap", gap, "S2 relative gap tolerance");
  est->add_option("--tol", feas_tol, "solver feasibility tolerance");
  est->add_option("--gap-tol", gap_tol, "solver duality-gap tolerance");
  est->add_flag("--no-s0", no_s0, "drop the slack-power block");
  est->add_flag("--json", json_out, "print the record as JSON");

  // benchmark / sweep
  std::string config_path, out_dir;
  auto* ben = app.add_subcommand("benchmark", "run a benchmark grid from a JSON config");
  ben->add_option("--config", config_path, "JSON config path")->required();
  ben->add_option("--out", out_dir, "output directory override");

  auto* swp = app.add_subcommand("sweep", "S1 hyperparameter sweep from a JSON config");
  swp->add_option("--config", config_path, "JSON config path")->required();
  swp->add_option("--out", out_dir, "output directory override");

  // gencase
  int buses = 141;
  std::uint64_t gseed = 7;
  std::string gout;
  auto* gen = app.add_subcommand("gencase", "generate a synthetic radial feeder case file");
  gen->add_option("--buses", buses, "total bus count");
  gen->add_option("--seed", gseed, "generator seed");
  gen->add_option("--out", gout, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed())
      return cmd_estimate(case_ref, method, fad, seed, k, lambda, d, nd, delta, noise_v, noise_s,
                          loss, dump_model, trace_path, max_nodes, time_limit, gap, feas_tol,
                          gap_tol, no_s0, json_out);
    if (ben->parsed()) return cmd_benchmark(config_path, out_dir, false);
    if (swp->parsed()) return cmd_benchmark(config_path, out_dir, true);
    if (gen->parsed()) return cmd_gencase(buses, gseed, gout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
