#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pfmc/conic/compile.hpp"

namespace pfmc::conic {

/// Reusable buffers for PSD cone projections.
class ConeProjector {
 public:
  explicit ConeProjector(const ConeLayout& layout);

  /// Projects y (length layout.rows()) onto the dual cone K* in place.
  /// The dual of the zero cone is free, so those rows pass through.
  void project_dual(Eigen::Ref<Eigen::VectorXd> y);

  /// Projects s onto K itself (zero rows are zeroed).
  void project_primal(Eigen::Ref<Eigen::VectorXd> s);

 private:
  void project_common(Eigen::Ref<Eigen::VectorXd> v, bool zero_rows);
  void psd_project(double* block, int d);

  ConeLayout layout_;
  Eigen::MatrixXd mat_, part_, scratch_;
  Eigen::VectorXd eigvals_;
  std::vector<double> work_;
  std::vector<int> iwork_;
};

/// Projects the (t, z) pair onto the second-order cone in place.
void soc_project(double* block, int len);

/// Eigendecomposition of a symmetric matrix (ascending eigenvalues),
/// LAPACK-backed above a small-size threshold.
void sym_eig(const Eigen::MatrixXd& S, Eigen::VectorXd& eigvals, Eigen::MatrixXd& eigvecs);

}  // namespace pfmc::conic
