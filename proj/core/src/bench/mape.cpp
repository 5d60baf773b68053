#include "pfmc/bench/mape.hpp"

#include <cmath>
#include <stdexcept>

namespace pfmc::bench {

double mape(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  if (estimate.size() != truth.size()) throw std::invalid_argument("mape: length mismatch");
  if (truth.size() == 0) throw std::invalid_argument("mape: empty vectors");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0.0) throw std::invalid_argument("mape: zero truth entry");
    acc += std::abs(estimate[i] - truth[i]) / std::abs(truth[i]);
  }
  return 100.0 * acc / static_cast<double>(truth.size());
}

}  // namespace pfmc::bench
