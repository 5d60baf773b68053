#include "pfmc/conic/check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfmc/conic/cones.hpp"

namespace pfmc::conic {

double CheckReport::worst() const {
  return std::max({max_equality, max_inequality, max_soc, max_psd});
}

std::string CheckReport::summary() const {
  std::ostringstream os;
  os << "eq " << max_equality << ", ineq " << max_inequality << ", soc " << max_soc << ", psd "
     << max_psd;
  return os.str();
}

CheckReport check_solution(const ConicProgram& prog, const Eigen::VectorXd& x) {
  CheckReport rep;
  const double* vals = x.data();

  for (const auto& [id, c] : prog.constraints()) {
    switch (c.kind) {
      case ConstraintKind::Equality: {
        const double r = std::abs(c.expr.evaluate(vals)) / (1.0 + std::abs(c.expr.constant()));
        rep.max_equality = std::max(rep.max_equality, r);
        break;
      }
      case ConstraintKind::Inequality: {
        const double r =
            std::max(0.0, c.expr.evaluate(vals)) / (1.0 + std::abs(c.expr.constant()));
        rep.max_inequality = std::max(rep.max_inequality, r);
        break;
      }
      case ConstraintKind::SecondOrderCone: {
        const double t = c.soc_scalar.evaluate(vals);
        double nz = 0.0;
        for (const auto& e : c.soc_vec) {
          const double v = e.evaluate(vals);
          nz += v * v;
        }
        nz = std::sqrt(nz);
        const double r = std::max(0.0, nz - t) / (1.0 + std::abs(t) + std::abs(nz));
        rep.max_soc = std::max(rep.max_soc, r);
        break;
      }
      case ConstraintKind::PsdCone: {
        const int d = c.psd_dim;
        Eigen::MatrixXd S(d, d);
        size_t idx = 0;
        double scale = 0.0;
        for (int j = 0; j < d; ++j) {
          for (int i = j; i < d; ++i, ++idx) {
            const double v = c.psd_lower[idx].evaluate(vals);
            S(i, j) = v;
            S(j, i) = v;
            scale = std::max(scale, std::abs(v));
          }
        }
        Eigen::VectorXd lam;
        Eigen::MatrixXd vecs;
        sym_eig(S, lam, vecs);
        const double r = std::max(0.0, -lam[0]) / (1.0 + scale);
        rep.max_psd = std::max(rep.max_psd, r);
        break;
      }
    }
  }
  return rep;
}

}  // namespace pfmc::conic
