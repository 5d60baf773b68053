#pragma once

#include <Eigen/Dense>
#include <Eigen/LU>

#include "pfmc/net/case.hpp"

namespace pfmc::net {

/// Bus admittance matrix partitioned against the slack bus. With the slack
/// stored first, Y = [[Y00, Y0L], [YL0, YLL]].
struct AdmittancePartition {
  Complex y00;
  Eigen::RowVectorXcd y0l;  // 1 x n
  Eigen::VectorXcd yl0;     // n x 1
  Eigen::MatrixXcd yll;     // n x n

  Eigen::PartialPivLU<Eigen::MatrixXcd> yll_lu;  // cached factorization

  int n() const { return static_cast<int>(yll.rows()); }

  /// Reassembled full matrix (for symmetry checks and tests).
  Eigen::MatrixXcd full() const;
};

/// Assembles and partitions the bus admittance matrix. Throws on a
/// numerically singular load block (message carries a condition estimate).
AdmittancePartition build_admittance(const NetworkCase& c);

}  // namespace pfmc::net
