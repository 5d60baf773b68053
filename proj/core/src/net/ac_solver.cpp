#include "pfmc/net/ac_solver.hpp"

#include <stdexcept>

namespace pfmc::net {

AcSolution solve_ac_power_flow(const NetworkCase& c, const AdmittancePartition& part,
                               double load_scale) {
  const int n = part.n();
  Eigen::VectorXcd s(n);
  {
    const auto inj = c.load_injections();
    for (int i = 0; i < n; ++i) s[i] = load_scale * inj[i];
  }
  const Eigen::VectorXcd w = part.yll_lu.solve(-part.yl0 * c.v0);

  Eigen::VectorXcd v = w;
  AcSolution sol;
  constexpr int kMaxIter = 200;
  constexpr double kTol = 1e-10;
  for (int it = 1; it <= kMaxIter; ++it) {
    Eigen::VectorXcd rhs = (s.conjugate().array() / v.conjugate().array()).matrix();
    Eigen::VectorXcd v_next = w + part.yll_lu.solve(rhs);
    const double delta = (v_next - v).cwiseAbs().maxCoeff();
    v = v_next;
    sol.iterations = it;
    if (delta <= kTol) break;
    if (it == kMaxIter)
      throw std::runtime_error("AC power flow diverged (feeder overloaded or ill-posed)");
    if (!v.allFinite()) throw std::runtime_error("AC power flow produced non-finite voltages");
  }

  // Residual of the exact power equations.
  const Eigen::VectorXcd i_load = part.yl0 * c.v0 + part.yll * v;
  sol.mismatch = ((v.array() * i_load.conjugate().array()) - s.array()).abs().maxCoeff();
  sol.s0 = c.v0 * std::conj(part.y00 * c.v0 + (part.y0l * v)(0));
  sol.v = std::move(v);
  return sol;
}

AcSolution solve_ac_power_flow(const NetworkCase& c) {
  return solve_ac_power_flow(c, build_admittance(c), 1.0);
}

}  // namespace pfmc::net
