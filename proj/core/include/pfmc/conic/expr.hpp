#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace pfmc::conic {

/// Index of a scalar decision variable inside a ConicProgram.
using VarIndex = std::int32_t;

struct LinTerm {
  VarIndex var = -1;
  double coef = 0.0;
  friend bool operator==(const LinTerm&, const LinTerm&) = default;
};

/// Sparse affine expression: sum of coef*var plus a constant.
class LinExpr {
 public:
  LinExpr() = default;
  /*implicit*/ LinExpr(double constant) : constant_(constant) {}
  LinExpr(VarIndex var, double coef) { terms_.push_back({var, coef}); }

  static LinExpr variable(VarIndex v) { return LinExpr(v, 1.0); }

  LinExpr& operator+=(const LinExpr& rhs);
  LinExpr& operator-=(const LinExpr& rhs);
  LinExpr& operator*=(double s);
  LinExpr operator-() const;

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, double s) { return a *= s; }
  friend LinExpr operator*(double s, LinExpr a) { return a *= s; }

  void add_term(VarIndex var, double coef) { terms_.push_back({var, coef}); }

  /// Sorts terms by variable, merges duplicates, drops exact zeros.
  void canonicalize();

  const std::vector<LinTerm>& terms() const { return terms_; }
  double constant() const { return constant_; }
  void set_constant(double c) { constant_ = c; }
  bool is_constant() const { return terms_.empty(); }

  /// Evaluates against a dense assignment of all scalar variables.
  double evaluate(const double* values) const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;

 private:
  std::vector<LinTerm> terms_;
  double constant_ = 0.0;
};

/// Dense matrix of affine expressions, used for PSD constraint bodies.
class MatExpr {
 public:
  MatExpr() = default;
  MatExpr(int rows, int cols) : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  LinExpr& at(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
  const LinExpr& at(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }

  /// True when entry (i,j) and entry (j,i) canonicalize to the same expression.
  bool is_symmetric() const;

  /// Canonicalizes all entries in place.
  void canonicalize();

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<LinExpr> entries_;
};

}  // namespace pfmc::conic
