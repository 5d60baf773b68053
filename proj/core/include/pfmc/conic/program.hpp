#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pfmc/conic/expr.hpp"

namespace pfmc::conic {

class ConicProgram;

/// Handle to a registered constraint; stays valid until removed.
struct ConstraintHandle {
  std::uint64_t id = 0;
  friend bool operator==(const ConstraintHandle&, const ConstraintHandle&) = default;
};

enum class ConstraintKind { Equality, Inequality, SecondOrderCone, PsdCone };

struct Constraint {
  ConstraintKind kind;
  // Equality: expr == 0.  Inequality: expr <= 0.
  LinExpr expr;
  // SecondOrderCone: norm(vec) <= scalar.
  LinExpr soc_scalar;
  std::vector<LinExpr> soc_vec;
  // PsdCone: dim x dim symmetric expression, lower triangle stored
  // column-major ((i,j) with i >= j).
  int psd_dim = 0;
  std::vector<LinExpr> psd_lower;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct VariableInfo {
  std::string name;
  enum class Kind { Scalar, Matrix, Symmetric } kind = Kind::Scalar;
  int rows = 1;
  int cols = 1;
  // First scalar index; a Matrix occupies rows*cols slots row-major, a
  // Symmetric occupies rows*(rows+1)/2 slots (lower triangle column-major).
  VarIndex base = -1;
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();

  friend bool operator==(const VariableInfo&, const VariableInfo&) = default;
};

class ScalarVar {
 public:
  ScalarVar() = default;
  ScalarVar(VarIndex idx) : idx_(idx) {}
  VarIndex index() const { return idx_; }
  /*implicit*/ operator LinExpr() const { return LinExpr::variable(idx_); }
  LinExpr expr() const { return LinExpr::variable(idx_); }

 private:
  VarIndex idx_ = -1;
};

/// View over a rectangular matrix variable; entries are scalar variables.
class MatrixVar {
 public:
  MatrixVar() = default;
  MatrixVar(VarIndex base, int rows, int cols) : base_(base), rows_(rows), cols_(cols) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  VarIndex index(int i, int j) const { return base_ + i * cols_ + j; }
  LinExpr operator()(int i, int j) const { return LinExpr::variable(index(i, j)); }

 private:
  VarIndex base_ = -1;
  int rows_ = 0, cols_ = 0;
};

/// View over a symmetric matrix variable; (i,j) and (j,i) share a slot.
class SymmetricVar {
 public:
  SymmetricVar() = default;
  SymmetricVar(VarIndex base, int dim) : base_(base), dim_(dim) {}
  int dim() const { return dim_; }
  VarIndex index(int i, int j) const {
    if (i < j) std::swap(i, j);
    // column-major lower triangle: offset(j) = j*dim - j(j-1)/2
    return base_ + j * dim_ - j * (j - 1) / 2 + (i - j);
  }
  LinExpr operator()(int i, int j) const { return LinExpr::variable(index(i, j)); }

 private:
  VarIndex base_ = -1;
  int dim_ = 0;
};

/// Solver-agnostic conic program: linear objective, linear / second-order /
/// PSD cone constraints over scalar and matrix variables.
class ConicProgram {
 public:
  ScalarVar add_scalar(const std::string& name);
  ScalarVar add_scalar(const std::string& name, double lb, double ub);
  MatrixVar add_matrix(const std::string& name, int rows, int cols);
  SymmetricVar add_symmetric(const std::string& name, int dim);

  ConstraintHandle add_equality(LinExpr expr);
  ConstraintHandle add_inequality(LinExpr expr);  // expr <= 0
  ConstraintHandle add_soc(LinExpr scalar, std::vector<LinExpr> vec);
  ConstraintHandle add_psd(const MatExpr& expr);

  bool remove(ConstraintHandle h);
  bool has_constraint(ConstraintHandle h) const { return constraints_.count(h.id) > 0; }

  void set_objective(LinExpr objective);  // minimized
  const LinExpr& objective() const { return objective_; }

  int num_scalar_vars() const { return next_var_; }
  const std::vector<VariableInfo>& variables() const { return vars_; }
  const std::map<std::uint64_t, Constraint>& constraints() const { return constraints_; }

  const Constraint& constraint(ConstraintHandle h) const { return constraints_.at(h.id); }

  /// Canonical, order-independent equality (used by the round-trip tests).
  friend bool operator==(const ConicProgram& a, const ConicProgram& b);

  std::string to_json() const;
  static ConicProgram from_json(const std::string& text);

 private:
  VarIndex reserve(int count);
  void validate_expr(const LinExpr& e) const;

  std::vector<VariableInfo> vars_;
  VarIndex next_var_ = 0;
  std::map<std::uint64_t, Constraint> constraints_;
  std::uint64_t next_id_ = 1;
  LinExpr objective_;
};

}  // namespace pfmc::conic
