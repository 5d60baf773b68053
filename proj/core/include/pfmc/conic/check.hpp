#pragma once

#include <Eigen/Dense>
#include <string>

#include "pfmc/conic/program.hpp"

namespace pfmc::conic {

/// Outcome of the independent feasibility audit of a candidate solution.
/// Violations are normalized per constraint by 1 + |constant part|.
struct CheckReport {
  double max_equality = 0.0;
  double max_inequality = 0.0;
  double max_soc = 0.0;
  double max_psd = 0.0;

  double worst() const;
  bool passes(double tol) const { return worst() <= tol; }
  std::string summary() const;
};

/// Recomputes all constraint residuals of `prog` at `x` from the original
/// constraint data; never trusts solver-side bookkeeping.
CheckReport check_solution(const ConicProgram& prog, const Eigen::VectorXd& x);

}  // namespace pfmc::conic
