#pragma once

#include <Eigen/Dense>

#include "pfmc/net/admittance.hpp"

namespace pfmc::net {

struct AcSolution {
  Eigen::VectorXcd v;  // non-slack bus voltages
  Complex s0;          // slack power injection
  int iterations = 0;
  double mismatch = 0.0;  // worst per-bus complex power residual
};

/// Z-bus fixed-point AC power flow (slack-referenced). Converges to an
/// update norm of 1e-10 pu; throws after 200 iterations (overload).
AcSolution solve_ac_power_flow(const NetworkCase& c);

/// Variant reusing a prebuilt partition, with load injections scaled by t.
AcSolution solve_ac_power_flow(const NetworkCase& c, const AdmittancePartition& part,
                               double load_scale = 1.0);

}  // namespace pfmc::net
