#include "pfmc/conic/expr.hpp"

#include <algorithm>

namespace pfmc::conic {

LinExpr& LinExpr::operator+=(const LinExpr& rhs) {
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  constant_ += rhs.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& rhs) {
  terms_.reserve(terms_.size() + rhs.terms_.size());
  for (const auto& t : rhs.terms_) terms_.push_back({t.var, -t.coef});
  constant_ -= rhs.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (auto& t : terms_) t.coef *= s;
  constant_ *= s;
  return *this;
}

LinExpr LinExpr::operator-() const {
  LinExpr out(*this);
  out *= -1.0;
  return out;
}

void LinExpr::canonicalize() {
  if (terms_.empty()) return;
  std::sort(terms_.begin(), terms_.end(),
            [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
  size_t w = 0;
  for (size_t r = 0; r < terms_.size(); ++r) {
    if (w > 0 && terms_[w - 1].var == terms_[r].var) {
      terms_[w - 1].coef += terms_[r].coef;
    } else {
      terms_[w++] = terms_[r];
    }
  }
  terms_.resize(w);
  std::erase_if(terms_, [](const LinTerm& t) { return t.coef == 0.0; });
}

double LinExpr::evaluate(const double* values) const {
  double acc = constant_;
  for (const auto& t : terms_) acc += t.coef * values[t.var];
  return acc;
}

bool MatExpr::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < i; ++j) {
      LinExpr a = at(i, j);
      LinExpr b = at(j, i);
      a.canonicalize();
      b.canonicalize();
      if (!(a == b)) return false;
    }
  }
  return true;
}

void MatExpr::canonicalize() {
  for (auto& e : entries_) e.canonicalize();
}

}  // namespace pfmc::conic
