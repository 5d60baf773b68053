#include "pfmc/conic/compile.hpp"

#include <cmath>

namespace pfmc::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

int svec_len(int d) { return d * (d + 1) / 2; }

int ConeLayout::rows() const {
  int n = zero + nonneg;
  for (int q : soc) n += q;
  for (int d : psd_dim) n += svec_len(d);
  return n;
}

int ConeLayout::psd_offset() const {
  int n = zero + nonneg;
  for (int q : soc) n += q;
  return n;
}

void svec_pack(const Eigen::MatrixXd& S, double* out) {
  const int d = static_cast<int>(S.rows());
  int k = 0;
  for (int j = 0; j < d; ++j) {
    out[k++] = S(j, j);
    for (int i = j + 1; i < d; ++i) out[k++] = kSqrt2 * S(i, j);
  }
}

void svec_unpack(const double* in, int d, Eigen::MatrixXd& S) {
  S.resize(d, d);
  int k = 0;
  for (int j = 0; j < d; ++j) {
    S(j, j) = in[k++];
    for (int i = j + 1; i < d; ++i) {
      const double v = in[k++] / kSqrt2;
      S(i, j) = v;
      S(j, i) = v;
    }
  }
}

// Standard form: min c^T x  s.t.  A x + s = b, s in K.
// Equality expr == 0      ->  s = expr      in the zero cone.
// Inequality expr <= 0    ->  s = -expr     in the nonnegative cone.
// SOC / PSD body F        ->  s = F         in the respective cone.
Compiled compile(const ConicProgram& prog) {
  Compiled out;
  const int n = prog.num_scalar_vars();

  std::vector<const Constraint*> eqs, ineqs, socs, psds;
  for (const auto& [id, c] : prog.constraints()) {
    switch (c.kind) {
      case ConstraintKind::Equality: eqs.push_back(&c); break;
      case ConstraintKind::Inequality: ineqs.push_back(&c); break;
      case ConstraintKind::SecondOrderCone: socs.push_back(&c); break;
      case ConstraintKind::PsdCone: psds.push_back(&c); break;
    }
  }

  ConeLayout& layout = out.layout;
  layout.zero = static_cast<int>(eqs.size());
  layout.nonneg = static_cast<int>(ineqs.size());
  for (const auto* c : socs) layout.soc.push_back(1 + static_cast<int>(c->soc_vec.size()));
  for (const auto* c : psds) layout.psd_dim.push_back(c->psd_dim);

  const int m = layout.rows();
  out.b = Eigen::VectorXd::Zero(m);
  out.c = Eigen::VectorXd::Zero(n);
  for (const auto& t : prog.objective().terms()) out.c[t.var] += t.coef;

  std::vector<Eigen::Triplet<double>> trip;
  int row = 0;
  auto put = [&](const LinExpr& e, double sign, double scale = 1.0) {
    // s_row = b_row - A_row x must equal sign * scale * e(x).
    for (const auto& t : e.terms()) trip.emplace_back(row, t.var, -sign * scale * t.coef);
    out.b[row] = sign * scale * e.constant();
    ++row;
  };

  for (const auto* c : eqs) put(c->expr, +1.0);
  for (const auto* c : ineqs) put(c->expr, -1.0);
  for (const auto* c : socs) {
    put(c->soc_scalar, +1.0);
    for (const auto& e : c->soc_vec) put(e, +1.0);
  }
  for (const auto* c : psds) {
    const int d = c->psd_dim;
    size_t idx = 0;
    for (int j = 0; j < d; ++j) {
      for (int i = j; i < d; ++i, ++idx) {
        put(c->psd_lower[idx], +1.0, i == j ? 1.0 : kSqrt2);
      }
    }
  }

  out.A.resize(m, n);
  out.A.setFromTriplets(trip.begin(), trip.end());
  out.A.makeCompressed();
  return out;
}

}  // namespace pfmc::conic
