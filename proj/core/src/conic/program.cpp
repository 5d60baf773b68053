#include "pfmc/conic/program.hpp"

#include <algorithm>
#include <stdexcept>

namespace pfmc::conic {

VarIndex ConicProgram::reserve(int count) {
  VarIndex base = next_var_;
  next_var_ += count;
  return base;
}

ScalarVar ConicProgram::add_scalar(const std::string& name) {
  VariableInfo info;
  info.name = name;
  info.kind = VariableInfo::Kind::Scalar;
  info.base = reserve(1);
  vars_.push_back(info);
  return ScalarVar(info.base);
}

ScalarVar ConicProgram::add_scalar(const std::string& name, double lb, double ub) {
  if (lb > ub) throw std::invalid_argument("variable '" + name + "': lb > ub");
  ScalarVar v = add_scalar(name);
  vars_.back().lb = lb;
  vars_.back().ub = ub;
  if (std::isfinite(lb)) add_inequality(LinExpr(lb) - v);
  if (std::isfinite(ub)) add_inequality(LinExpr(v) - LinExpr(ub));
  return v;
}

MatrixVar ConicProgram::add_matrix(const std::string& name, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix variable needs positive dims");
  VariableInfo info;
  info.name = name;
  info.kind = VariableInfo::Kind::Matrix;
  info.rows = rows;
  info.cols = cols;
  info.base = reserve(rows * cols);
  vars_.push_back(info);
  return MatrixVar(info.base, rows, cols);
}

SymmetricVar ConicProgram::add_symmetric(const std::string& name, int dim) {
  if (dim <= 0) throw std::invalid_argument("symmetric variable needs positive dim");
  VariableInfo info;
  info.name = name;
  info.kind = VariableInfo::Kind::Symmetric;
  info.rows = dim;
  info.cols = dim;
  info.base = reserve(dim * (dim + 1) / 2);
  vars_.push_back(info);
  return SymmetricVar(info.base, dim);
}

void ConicProgram::validate_expr(const LinExpr& e) const {
  for (const auto& t : e.terms()) {
    if (t.var < 0 || t.var >= next_var_)
      throw std::invalid_argument("expression references undeclared variable");
    if (!std::isfinite(t.coef)) throw std::invalid_argument("non-finite coefficient");
  }
  if (!std::isfinite(e.constant())) throw std::invalid_argument("non-finite constant");
}

ConstraintHandle ConicProgram::add_equality(LinExpr expr) {
  validate_expr(expr);
  expr.canonicalize();
  Constraint c;
  c.kind = ConstraintKind::Equality;
  c.expr = std::move(expr);
  constraints_.emplace(next_id_, std::move(c));
  return {next_id_++};
}

ConstraintHandle ConicProgram::add_inequality(LinExpr expr) {
  validate_expr(expr);
  expr.canonicalize();
  Constraint c;
  c.kind = ConstraintKind::Inequality;
  c.expr = std::move(expr);
  constraints_.emplace(next_id_, std::move(c));
  return {next_id_++};
}

ConstraintHandle ConicProgram::add_soc(LinExpr scalar, std::vector<LinExpr> vec) {
  validate_expr(scalar);
  scalar.canonicalize();
  for (auto& e : vec) {
    validate_expr(e);
    e.canonicalize();
  }
  Constraint c;
  c.kind = ConstraintKind::SecondOrderCone;
  c.soc_scalar = std::move(scalar);
  c.soc_vec = std::move(vec);
  constraints_.emplace(next_id_, std::move(c));
  return {next_id_++};
}

ConstraintHandle ConicProgram::add_psd(const MatExpr& expr) {
  if (expr.rows() != expr.cols()) throw std::invalid_argument("PSD block must be square");
  if (!expr.is_symmetric()) throw std::invalid_argument("PSD block must be symmetric");
  Constraint c;
  c.kind = ConstraintKind::PsdCone;
  c.psd_dim = expr.rows();
  c.psd_lower.reserve(static_cast<size_t>(expr.rows()) * (expr.rows() + 1) / 2);
  for (int j = 0; j < expr.cols(); ++j) {
    for (int i = j; i < expr.rows(); ++i) {
      LinExpr e = expr.at(i, j);
      validate_expr(e);
      e.canonicalize();
      c.psd_lower.push_back(std::move(e));
    }
  }
  constraints_.emplace(next_id_, std::move(c));
  return {next_id_++};
}

bool ConicProgram::remove(ConstraintHandle h) { return constraints_.erase(h.id) > 0; }

void ConicProgram::set_objective(LinExpr objective) {
  validate_expr(objective);
  objective.canonicalize();
  objective_ = std::move(objective);
}

bool operator==(const ConicProgram& a, const ConicProgram& b) {
  if (a.vars_ != b.vars_ || a.next_var_ != b.next_var_) return false;
  if (!(a.objective_ == b.objective_)) return false;
  if (a.constraints_.size() != b.constraints_.size()) return false;
  // ids may differ after round-trips; compare in creation order.
  auto ia = a.constraints_.begin();
  auto ib = b.constraints_.begin();
  for (; ia != a.constraints_.end(); ++ia, ++ib) {
    if (!(ia->second == ib->second)) return false;
  }
  return true;
}

}  // namespace pfmc::conic
