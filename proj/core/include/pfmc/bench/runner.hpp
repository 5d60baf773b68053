#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfmc/bnb/bnb.hpp"
#include "pfmc/meas/measurement.hpp"
#include "pfmc/models/builders.hpp"
#include "pfmc/net/admittance.hpp"
#include "pfmc/net/linear_model.hpp"

namespace pfmc::bench {

enum class Method { M1, M2, S1, S2, FullPsd };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BenchmarkRecord {
  std::string case_name;
  Method method = Method::S1;
  double fad = 0.0;
  std::uint64_t seed = 0;
  int k = 1;
  double lambda = 10.0;
  int d = 5;
  int n_d = 0;
  double delta = 0.0;
  double mape_vmag = std::numeric_limits<double>::quiet_NaN();
  double mape_phase = std::numeric_limits<double>::quiet_NaN();
  double wall_time_sec = 0.0;
  std::string status;  // conic status, "bound-only" qualifier for S2
  long nodes = 0;      // S2 only

  bool solved() const { return status == "optimal" || status == "incumbent"; }
};

/// Benchmark configuration; parsed from the JSON document described in the
/// README.
struct RunConfig {
  std::string case_ref;  // path, or "synthetic:<buses>:<seed>"
  std::vector<Method> methods{Method::S1};
  double fad = 0.32;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int k = 1;
  double lambda = 10.0;
  std::vector<int> d_grid{5};
  std::vector<int> nd_grid{0};  // 0 = one set per matrix entry (5n)
  std::optional<double> delta;  // absent = noise-calibrated default
  meas::NoiseSpec noise;
  models::Loss loss = models::Loss::L1;
  bool use_slack_power = true;
  conic::SolveSettings solver = conic::SolveSettings::benchmark();
  bnb::Limits bnb;
  int workers = 1;
  std::string out_dir = "bench_out";

  static RunConfig from_json_file(const std::string& path);
  static RunConfig from_json(const std::string& text);
};

/// A resolved feeder with its derived operators.
struct CaseBundle {
  net::NetworkCase feeder;
  net::AdmittancePartition part;
  net::LinearPowerFlowModel lpf;
  std::string name;
};
CaseBundle resolve_case(const std::string& case_ref);

/// Runs one (case, method, seed, d, nd) cell.
BenchmarkRecord run_cell(const CaseBundle& bundle, const RunConfig& cfg, Method method, int d,
                         int nd_cap, std::uint64_t seed);

/// Full benchmark grid; failures are recorded, never fatal.
std::vector<BenchmarkRecord> run_benchmark(const RunConfig& cfg);

/// S1-only (d, n_d) sweep.
std::vector<BenchmarkRecord> sweep_hyperparameters(const RunConfig& cfg);

// --- reporting ---------------------------------------------------------

std::string csv_header();
std::string to_csv_row(const BenchmarkRecord& r);
void write_csv(const std::vector<BenchmarkRecord>& records, const std::string& path);

/// Median-over-seeds summary tables (aligned text, Markdown, CSV).
struct Summary {
  std::string text;
  std::string markdown;
  std::string csv;
};
Summary summarize(const std::vector<BenchmarkRecord>& records);

double median(std::vector<double> values);

}  // namespace pfmc::bench
