#pragma once

#include <Eigen/Dense>

namespace pfmc::bench {

/// Mean absolute percentage error: (100/n) * sum |est_i - true_i| / |true_i|.
/// Throws std::invalid_argument on a zero truth entry or length mismatch.
double mape(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

}  // namespace pfmc::bench
