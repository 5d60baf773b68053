#include <cmath>
#include <stdexcept>

#include "pfmc/bnb/bnb.hpp"
#include "pfmc/conic/cones.hpp"

namespace pfmc::bnb {

void add_secant_cut(models::ModelBuild& build, const IntervalCut& cut) {
  if (cut.lo > cut.hi) throw std::invalid_argument("secant cut with inverted interval");
  if (!build.Y || !build.U) throw std::invalid_argument("model lacks projection variables");
  const int n = build.n;
  if (cut.z.size() != n) throw std::invalid_argument("cut direction has wrong length");
  if (cut.column < 0 || cut.column >= build.k) throw std::invalid_argument("cut column out of range");

  conic::LinExpr uz;  // U_col' z
  for (int p = 0; p < n; ++p) uz.add_term(build.U->index(p, cut.column), cut.z[p]);

  // z'Yz <= (lo+hi)(U_col' z) - lo*hi   (tight at both interval endpoints)
  conic::LinExpr zyz;
  for (int p = 0; p < n; ++p) {
    zyz.add_term(build.Y->index(p, p), cut.z[p] * cut.z[p]);
    for (int q = p + 1; q < n; ++q) {
      const double c = 2.0 * cut.z[p] * cut.z[q];
      if (c != 0.0) zyz.add_term(build.Y->index(q, p), c);
    }
  }
  build.prog.add_inequality(zyz - (cut.lo + cut.hi) * uz + conic::LinExpr(cut.lo * cut.hi));
  build.prog.add_inequality(conic::LinExpr(cut.lo) - uz);
  build.prog.add_inequality(uz - conic::LinExpr(cut.hi));
}

std::pair<IntervalCut, IntervalCut> split_cut(const IntervalCut& parent, double t_hat) {
  constexpr double kEdge = 1e-9;
  double t = std::clamp(t_hat, parent.lo, parent.hi);
  if (t - parent.lo < kEdge || parent.hi - t < kEdge) {
    t = 0.5 * (parent.lo + parent.hi);  // endpoint collision: midpoint split
  }
  IntervalCut left = parent, right = parent;
  left.hi = t;
  right.lo = t;
  return {left, right};
}

ProjectionGap projection_gap(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& U) {
  ProjectionGap g;
  const Eigen::MatrixXd R = Y - U * U.transpose();
  g.residual = R.norm();
  Eigen::VectorXd lam;
  Eigen::MatrixXd vecs;
  conic::sym_eig(R, lam, vecs);
  const int last = static_cast<int>(lam.size()) - 1;
  const int pick = std::abs(lam[0]) > std::abs(lam[last]) ? 0 : last;
  g.leading = lam[pick];
  g.z = vecs.col(pick);
  // canonical sign: largest-magnitude component positive
  int imax = 0;
  for (int i = 1; i < g.z.size(); ++i) {
    if (std::abs(g.z[i]) > std::abs(g.z[imax])) imax = i;
  }
  if (g.z[imax] < 0.0) g.z = -g.z;
  return g;
}

}  // namespace pfmc::bnb
