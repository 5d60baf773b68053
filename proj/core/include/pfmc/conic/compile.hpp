#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "pfmc/conic/program.hpp"

namespace pfmc::conic {

/// Row layout of the compiled cone: zero rows, then nonnegative rows, then
/// second-order blocks, then PSD blocks (svec with sqrt(2)-scaled
/// off-diagonals, column-major lower triangle).
struct ConeLayout {
  int zero = 0;
  int nonneg = 0;
  std::vector<int> soc;      // block lengths (1 + vector length)
  std::vector<int> psd_dim;  // matrix dimensions d; block length d(d+1)/2

  int rows() const;
  int soc_offset() const { return zero + nonneg; }
  int psd_offset() const;
};

/// Standard-form data:  min c^T x  s.t.  A x + s = b,  s in K.
struct Compiled {
  Eigen::SparseMatrix<double> A;  // rows() x num_vars
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  ConeLayout layout;
};

Compiled compile(const ConicProgram& prog);

int svec_len(int d);
/// Packs a symmetric matrix into svec order (norm-preserving).
void svec_pack(const Eigen::MatrixXd& S, double* out);
void svec_unpack(const double* in, int d, Eigen::MatrixXd& S);

}  // namespace pfmc::conic
