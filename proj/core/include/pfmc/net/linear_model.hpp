#pragma once

#include <Eigen/Dense>

#include "pfmc/net/admittance.hpp"

namespace pfmc::net {

/// First-order Cartesian power-flow model around the zero-load voltage w:
///   v   ~= w   + A [Re(s); Im(s)]
///   |v| ~= |w| + C [Re(s); Im(s)]
/// with s the non-slack complex injection vector.
struct LinearPowerFlowModel {
  Eigen::VectorXcd w;   // zero-load non-slack voltages
  Eigen::MatrixXcd A;   // n x 2n complex sensitivity
  Eigen::MatrixXd C;    // n x 2n magnitude sensitivity

  int n() const { return static_cast<int>(w.size()); }

  Eigen::VectorXcd predict_voltage(const Eigen::VectorXcd& s) const;
  Eigen::VectorXd predict_magnitude(const Eigen::VectorXcd& s) const;
};

/// Builds the fixed-point linearization from the admittance partition.
/// Throws when the zero-load profile is degenerate (|w_i| < 1e-6 pu).
LinearPowerFlowModel build_linear_model(const AdmittancePartition& part, Complex v0);

}  // namespace pfmc::net
