#include "pfmc/net/linear_model.hpp"

#include <stdexcept>

namespace pfmc::net {

Eigen::VectorXcd LinearPowerFlowModel::predict_voltage(const Eigen::VectorXcd& s) const {
  Eigen::VectorXd u(2 * n());
  u.head(n()) = s.real();
  u.tail(n()) = s.imag();
  return w + A * u.cast<Complex>();
}

Eigen::VectorXd LinearPowerFlowModel::predict_magnitude(const Eigen::VectorXcd& s) const {
  Eigen::VectorXd u(2 * n());
  u.head(n()) = s.real();
  u.tail(n()) = s.imag();
  return w.cwiseAbs() + C * u;
}

LinearPowerFlowModel build_linear_model(const AdmittancePartition& part, Complex v0) {
  const int n = part.n();
  LinearPowerFlowModel m;
  m.w = part.yll_lu.solve(-part.yl0 * v0);
  for (int i = 0; i < n; ++i) {
    if (std::abs(m.w[i]) < 1e-6)
      throw std::runtime_error("degenerate feeder: zero-load voltage vanishes at load bus " +
                               std::to_string(i));
  }

  // B = YLL^{-1} diag(conj(w))^{-1}; A = [B | -jB] so that
  // A [Re(s); Im(s)] = B conj(s).
  Eigen::MatrixXcd B = part.yll_lu.solve(m.w.conjugate().cwiseInverse().asDiagonal().toDenseMatrix());
  m.A.resize(n, 2 * n);
  m.A.leftCols(n) = B;
  m.A.rightCols(n) = Complex(0.0, -1.0) * B;

  const Eigen::VectorXcd phase = m.w.conjugate().array() / m.w.cwiseAbs().array();
  m.C = (phase.asDiagonal() * m.A).real();
  return m;
}

}  // namespace pfmc::net
