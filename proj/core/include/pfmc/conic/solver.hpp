#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "pfmc/conic/program.hpp"

namespace pfmc::conic {

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  NumericalFailure,
  TimeLimit,
};

std::string to_string(SolveStatus s);

struct SolveSettings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double time_limit_sec = 0.0;  // 0 = unlimited
  long max_iters = 1'000'000;
  bool verbose = false;

  // Operator-splitting knobs.
  double over_relax = 1.5;
  int accel_memory = 10;   // 0 disables Anderson acceleration
  int check_interval = 25;

  static SolveSettings defaults() { return {}; }
  /// Relaxed tolerances used by the benchmark harness; recorded in results.
  static SolveSettings benchmark() {
    SolveSettings s;
    s.feas_tol = 1e-6;
    s.gap_tol = 1e-6;
    return s;
  }
};

struct Residuals {
  double primal = std::numeric_limits<double>::quiet_NaN();
  double dual = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
};

struct SolveReport {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd x;  // one entry per scalar variable, original scale
  Eigen::VectorXd dual;  // one entry per compiled cone row
  double wall_time_sec = 0.0;
  long iterations = 0;
  Residuals residuals;
  double check_violation = std::numeric_limits<double>::quiet_NaN();
  std::string detail;

  bool optimal() const { return status == SolveStatus::Optimal; }

  double value(const ScalarVar& v) const { return x[v.index()]; }
  Eigen::MatrixXd value(const MatrixVar& v) const;
  Eigen::MatrixXd value(const SymmetricVar& v) const;
};

/// Backend contract: additional solvers are drop-in implementations.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveReport solve(const ConicProgram& prog, const SolveSettings& settings) = 0;
  virtual std::string name() const = 0;
};

/// Creates a backend by name ("admm" is the shipped default).
std::unique_ptr<SolverBackend> make_solver(const std::string& name = "admm");

/// Solves with the default backend.
SolveReport solve(const ConicProgram& prog, const SolveSettings& settings = {});

}  // namespace pfmc::conic
