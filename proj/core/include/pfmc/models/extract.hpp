#pragma once

#include <Eigen/Dense>

#include "pfmc/conic/solver.hpp"
#include "pfmc/meas/measurement.hpp"
#include "pfmc/models/builders.hpp"

namespace pfmc::models {

struct ObjectiveParts {
  double fit_norm = 0.0;        // ||X_psi - M_psi||_F at the solution
  double theta_trace = 0.0;     // tr(Theta), when present
  double tolerance_loss = 0.0;  // weighted loss over the tolerance set
};

struct EstimationResult {
  conic::SolveStatus status = conic::SolveStatus::NumericalFailure;
  Eigen::MatrixXd X;          // recovered n x 5 matrix
  Eigen::VectorXcd voltages;  // phasors from columns 0/1
  Eigen::VectorXd vmag;       // magnitude estimates, column 2
  double mape_vmag = std::numeric_limits<double>::quiet_NaN();   // percent
  double mape_phase = std::numeric_limits<double>::quiet_NaN();  // percent
  ObjectiveParts parts;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double solve_time_sec = 0.0;
  long iterations = 0;

  bool optimal() const { return status == conic::SolveStatus::Optimal; }
};

/// Reads the state estimate out of an optimal solve; propagates non-optimal
/// statuses without fabricating an estimate.
EstimationResult extract_state(const ModelBuild& build, const conic::SolveReport& report,
                               const meas::MeasurementMatrix& m);

}  // namespace pfmc::models
