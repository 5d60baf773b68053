#include "pfmc/net/admittance.hpp"

#include <map>
#include <stdexcept>

namespace pfmc::net {

Eigen::MatrixXcd AdmittancePartition::full() const {
  const int nb = n() + 1;
  Eigen::MatrixXcd Y(nb, nb);
  Y(0, 0) = y00;
  Y.block(0, 1, 1, n()) = y0l;
  Y.block(1, 0, n(), 1) = yl0;
  Y.block(1, 1, n(), n()) = yll;
  return Y;
}

AdmittancePartition build_admittance(const NetworkCase& c) {
  validate_case(c);
  const int nb = c.total_buses();
  std::map<int, int> pos;
  for (int i = 0; i < nb; ++i) pos[c.buses[i].id] = i;

  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(nb, nb);
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    const int f = pos.at(br.from);
    const int t = pos.at(br.to);
    const Complex ys = Complex(1.0, 0.0) / br.z;
    const Complex ysh(0.0, br.charging / 2.0);
    const double tap = br.tap;
    Y(f, f) += ys / (tap * tap) + ysh;
    Y(t, t) += ys + ysh;
    Y(f, t) -= ys / tap;
    Y(t, f) -= ys / tap;
  }
  for (int i = 0; i < nb; ++i) Y(i, i) += c.buses[i].shunt;

  AdmittancePartition p;
  const int n = nb - 1;
  p.y00 = Y(0, 0);
  p.y0l = Y.block(0, 1, 1, n);
  p.yl0 = Y.block(1, 0, n, 1);
  p.yll = Y.block(1, 1, n, n);
  p.yll_lu.compute(p.yll);

  // Cheap conditioning probe: compare |YLL x| against |YLL| |x| for the
  // reconstructed identity.
  const double norm = p.yll.cwiseAbs().maxCoeff();
  Eigen::VectorXcd probe = p.yll_lu.solve(Eigen::VectorXcd::Ones(n));
  const double resid = (p.yll * probe - Eigen::VectorXcd::Ones(n)).norm();
  const double growth = probe.cwiseAbs().maxCoeff() * norm;
  if (!probe.allFinite() || resid > 1e-6) {
    throw std::runtime_error("load admittance block is numerically singular (cond >~ " +
                             std::to_string(growth) + ")");
  }
  return p;
}

}  // namespace pfmc::net
