#include "pfmc/conic/cones.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfmc::conic {

namespace {
// Below this dimension Eigen's fixed-pipeline solver beats the LAPACK
// call overhead.
constexpr int kSmallEig = 12;
}  // namespace

void soc_project(double* block, int len) {
  const double t = block[0];
  double nz = 0.0;
  for (int i = 1; i < len; ++i) nz += block[i] * block[i];
  nz = std::sqrt(nz);
  if (nz <= t) return;
  if (nz <= -t) {
    std::fill(block, block + len, 0.0);
    return;
  }
  const double beta = 0.5 * (t + nz);
  block[0] = beta;
  const double scale = beta / nz;
  for (int i = 1; i < len; ++i) block[i] *= scale;
}

void sym_eig(const Eigen::MatrixXd& S, Eigen::VectorXd& eigvals, Eigen::MatrixXd& eigvecs) {
  const int d = static_cast<int>(S.rows());
  if (d < kSmallEig) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    eigvals = es.eigenvalues();
    eigvecs = es.eigenvectors();
    return;
  }
  eigvecs = S;
  eigvals.resize(d);
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', d, eigvecs.data(), d, eigvals.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
}

ConeProjector::ConeProjector(const ConeLayout& layout) : layout_(layout) {
  int dmax = 1;
  for (int d : layout.psd_dim) dmax = std::max(dmax, d);
  mat_.resize(dmax, dmax);
  part_.resize(dmax, dmax);
  eigvals_.resize(dmax);
  work_.resize(static_cast<size_t>(1 + 6 * dmax + 2 * dmax * dmax));
  iwork_.resize(static_cast<size_t>(3 + 5 * dmax));
}

void ConeProjector::psd_project(double* block, int d) {
  svec_unpack(block, d, mat_);
  Eigen::Ref<Eigen::MatrixXd> M = mat_.topLeftCorner(d, d);

  if (d < kSmallEig) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const auto& lam = es.eigenvalues();
    if (lam[0] >= 0.0) return;            // already PSD
    if (lam[d - 1] <= 0.0) {              // entirely negative
      std::fill(block, block + svec_len(d), 0.0);
      return;
    }
    Eigen::MatrixXd pos = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      if (lam[i] > 0.0) pos += lam[i] * es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
    }
    svec_pack(pos, block);
    return;
  }

  // LAPACK path with preallocated workspaces.
  Eigen::VectorXd& lam = eigvals_;
  const int info = LAPACKE_dsyevd_work(LAPACK_COL_MAJOR, 'V', 'L', d, M.data(),
                                       static_cast<int>(mat_.rows()), lam.data(), work_.data(),
                                       static_cast<int>(work_.size()), iwork_.data(),
                                       static_cast<int>(iwork_.size()));
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));

  int npos = 0, nneg = 0;
  for (int i = 0; i < d; ++i) {
    if (lam[i] > 0.0) ++npos;
    else if (lam[i] < 0.0) ++nneg;
  }
  if (nneg == 0) return;  // block untouched and already PSD
  if (npos == 0) {
    std::fill(block, block + svec_len(d), 0.0);
    return;
  }

  // Rebuild from the smaller eigenvalue side.
  auto accumulate = [&](bool positive) {
    Eigen::Ref<Eigen::MatrixXd> P = part_.topLeftCorner(d, d);
    P.setZero();
    for (int i = 0; i < d; ++i) {
      const double l = lam[i];
      if ((positive && l > 0.0) || (!positive && l < 0.0)) {
        P.selfadjointView<Eigen::Lower>().rankUpdate(M.col(i), l);
      }
    }
    P.triangularView<Eigen::StrictlyUpper>() = P.transpose();
  };

  if (npos <= nneg) {
    accumulate(true);
    svec_pack(part_.topLeftCorner(d, d), block);
  } else {
    accumulate(false);  // negative part; subtracting it leaves the projection
    svec_unpack(block, d, scratch_);
    scratch_.topLeftCorner(d, d) -= part_.topLeftCorner(d, d);
    svec_pack(scratch_.topLeftCorner(d, d), block);
  }
}

void ConeProjector::project_common(Eigen::Ref<Eigen::VectorXd> v, bool zero_rows) {
  int off = 0;
  if (zero_rows) {
    v.head(layout_.zero).setZero();
  }
  off += layout_.zero;
  for (int i = 0; i < layout_.nonneg; ++i) {
    double& x = v[off + i];
    if (x < 0.0) x = 0.0;
  }
  off += layout_.nonneg;
  for (int q : layout_.soc) {
    soc_project(v.data() + off, q);
    off += q;
  }
  for (int d : layout_.psd_dim) {
    psd_project(v.data() + off, d);
    off += svec_len(d);
  }
}

void ConeProjector::project_dual(Eigen::Ref<Eigen::VectorXd> y) {
  // Dual of the zero cone is all of R^n: pass through.
  project_common(y, /*zero_rows=*/false);
}

void ConeProjector::project_primal(Eigen::Ref<Eigen::VectorXd> s) {
  project_common(s, /*zero_rows=*/true);
}

}  // namespace pfmc::conic
