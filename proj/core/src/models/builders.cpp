#include "pfmc/models/builders.hpp"

#include <cmath>
#include <stdexcept>

namespace pfmc::models {

using conic::ConicProgram;
using conic::LinExpr;
using conic::MatExpr;
using conic::ScalarVar;

SlackData SlackData::from_partition(const net::AdmittancePartition& part, net::Complex v0,
                                    std::optional<net::Complex> s0) {
  SlackData s;
  s.v0 = v0;
  s.s0 = s0;
  s.y00 = part.y00;
  s.y0l = part.y0l;
  return s;
}

namespace {

std::vector<LinExpr> fit_residuals(const ModelBuild& b, const meas::MeasurementMatrix& m) {
  std::vector<LinExpr> out;
  out.reserve(m.psi.size());
  for (const auto& [i, c] : m.psi) out.push_back(b.X(i, c) - LinExpr(m.values(i, c)));
  return out;
}

/// X, D1, D2 and the nuclear-norm PSD block shared by models (1) and (2).
ModelBuild nuclear_core(const meas::MeasurementMatrix& m) {
  ModelBuild b;
  b.n = m.n();
  const int n = b.n, mm = meas::kColumns;

  b.X = b.prog.add_matrix("X", n, mm);
  b.D1 = b.prog.add_symmetric("D1", n);
  b.D2 = b.prog.add_symmetric("D2", mm);

  MatExpr blk(n + mm, n + mm);
  for (int i = 0; i < n + mm; ++i) {
    for (int j = 0; j < n + mm; ++j) {
      if (i < n && j < n) blk.at(i, j) = (*b.D1)(i, j);
      else if (i >= n && j >= n) blk.at(i, j) = (*b.D2)(i - n, j - n);
      else if (i < n) blk.at(i, j) = b.X(i, j - n);
      else blk.at(i, j) = b.X(j, i - n);
    }
  }
  b.prog.add_psd(blk);
  return b;
}

LinExpr trace_objective(const ModelBuild& b) {
  LinExpr obj;
  for (int i = 0; i < b.n; ++i) obj += (*b.D1)(i, i);
  for (int j = 0; j < meas::kColumns; ++j) obj += (*b.D2)(j, j);
  return obj;
}

/// Square loss epigraph: returns q with q >= sum of squares of exprs.
ScalarVar square_loss(ConicProgram& prog, const std::string& name, std::vector<LinExpr> exprs) {
  ScalarVar q = prog.add_scalar(name);
  // ||((q-1)/2, e)||_2 <= (q+1)/2  <=>  q >= sum e_i^2
  std::vector<LinExpr> vec;
  vec.reserve(exprs.size() + 1);
  vec.push_back((LinExpr(q) - LinExpr(1.0)) * 0.5);
  for (auto& e : exprs) vec.push_back(std::move(e));
  prog.add_soc((LinExpr(q) + LinExpr(1.0)) * 0.5, std::move(vec));
  return q;
}

/// Appends the Cartesian linearized power-flow block; returns the weighted
/// loss over the tolerance variables.
LinExpr add_power_flow_block(ModelBuild& b, const net::LinearPowerFlowModel& lpf,
                             const SlackData& slack) {
  ConicProgram& prog = b.prog;
  const int n = b.n;

  auto injection_term = [&](int row, bool real_part) {
    // row of the complex sensitivity applied to [Re(s); Im(s)] = [X(:,3); X(:,4)]
    LinExpr e;
    for (int j = 0; j < n; ++j) {
      const net::Complex are = lpf.A(row, j);
      const net::Complex aim = lpf.A(row, n + j);
      if (real_part) {
        e.add_term(b.X.index(j, meas::kReS), are.real());
        e.add_term(b.X.index(j, meas::kImS), aim.real());
      } else {
        e.add_term(b.X.index(j, meas::kReS), are.imag());
        e.add_term(b.X.index(j, meas::kImS), aim.imag());
      }
    }
    return e;
  };

  b.tau_re.reserve(n);
  b.tau_im.reserve(n);
  b.gamma.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::string si = std::to_string(i);
    b.tau_re.push_back(prog.add_scalar("tau_re[" + si + "]"));
    b.tau_im.push_back(prog.add_scalar("tau_im[" + si + "]"));
    b.gamma.push_back(prog.add_scalar("gamma[" + si + "]"));
    prog.add_inequality(LinExpr(b.tau_re[i]) * -1.0);
    prog.add_inequality(LinExpr(b.tau_im[i]) * -1.0);
    prog.add_inequality(LinExpr(b.gamma[i]) * -1.0);
  }

  for (int i = 0; i < n; ++i) {
    // complex-voltage rows: -tau <= v - A [Re s; Im s] - w <= tau
    LinExpr re = b.X(i, meas::kReV) - injection_term(i, true) - LinExpr(lpf.w[i].real());
    LinExpr im = b.X(i, meas::kImV) - injection_term(i, false) - LinExpr(lpf.w[i].imag());
    prog.add_inequality(re - b.tau_re[i]);
    prog.add_inequality(-1.0 * re - b.tau_re[i]);
    prog.add_inequality(im - b.tau_im[i]);
    prog.add_inequality(-1.0 * im - b.tau_im[i]);

    // magnitude rows: -gamma <= |v| - (C [Re s; Im s] + |w|) <= gamma
    LinExpr mag = b.X(i, meas::kMagV) - LinExpr(std::abs(lpf.w[i]));
    for (int j = 0; j < n; ++j) {
      mag.add_term(b.X.index(j, meas::kReS), -lpf.C(i, j));
      mag.add_term(b.X.index(j, meas::kImS), -lpf.C(i, n + j));
    }
    prog.add_inequality(mag - b.gamma[i]);
    prog.add_inequality(-1.0 * mag - b.gamma[i]);
  }

  if (slack.s0.has_value()) {
    if (slack.y0l.size() != n)
      throw std::invalid_argument("slack data lacks the admittance row needed by the s0 block");
    b.alpha_re = prog.add_scalar("alpha_re");
    b.alpha_im = prog.add_scalar("alpha_im");
    prog.add_inequality(LinExpr(*b.alpha_re) * -1.0);
    prog.add_inequality(LinExpr(*b.alpha_im) * -1.0);

    // e = s0 - v0 conj(Y00 v0 + Y0L v); conj(v_j) = X(j,0) - i X(j,1)
    const net::Complex v0 = slack.v0;
    const net::Complex c0 = *slack.s0 - v0 * std::conj(slack.y00 * v0);
    LinExpr e_re(c0.real());
    LinExpr e_im(c0.imag());
    for (int j = 0; j < n; ++j) {
      const net::Complex f = -v0 * std::conj(slack.y0l(j));
      // f * conj(v_j): Re = f.re*X0 + f.im*X1, Im = f.im*X0 - f.re*X1
      e_re.add_term(b.X.index(j, meas::kReV), f.real());
      e_re.add_term(b.X.index(j, meas::kImV), f.imag());
      e_im.add_term(b.X.index(j, meas::kReV), f.imag());
      e_im.add_term(b.X.index(j, meas::kImV), -f.real());
    }
    prog.add_inequality(e_re - *b.alpha_re);
    prog.add_inequality(-1.0 * e_re - *b.alpha_re);
    prog.add_inequality(e_im - *b.alpha_im);
    prog.add_inequality(-1.0 * e_im - *b.alpha_im);
  }

  const ToleranceConfig& tc = b.tol_cfg;
  LinExpr loss;
  if (tc.loss == Loss::L1) {
    for (int i = 0; i < n; ++i) {
      loss += LinExpr(b.tau_re[i]) * tc.w_tau_re;
      loss += LinExpr(b.tau_im[i]) * tc.w_tau_im;
      loss += LinExpr(b.gamma[i]) * tc.w_gamma;
    }
    if (b.alpha_re) loss += LinExpr(*b.alpha_re) * tc.w_alpha_re;
    if (b.alpha_im) loss += LinExpr(*b.alpha_im) * tc.w_alpha_im;
  } else {
    auto group = [&](const std::vector<ScalarVar>& vars, const std::string& name, double w) {
      if (vars.empty() || w == 0.0) return;
      std::vector<LinExpr> exprs;
      exprs.reserve(vars.size());
      for (const auto& v : vars) exprs.push_back(v);
      loss += LinExpr(square_loss(b.prog, name, std::move(exprs))) * w;
    };
    group(b.tau_re, "loss_tau_re", tc.w_tau_re);
    group(b.tau_im, "loss_tau_im", tc.w_tau_im);
    group(b.gamma, "loss_gamma", tc.w_gamma);
    if (b.alpha_re) group({*b.alpha_re}, "loss_alpha_re", tc.w_alpha_re);
    if (b.alpha_im) group({*b.alpha_im}, "loss_alpha_im", tc.w_alpha_im);
  }
  return loss;
}

void check_meas(const meas::MeasurementMatrix& m) {
  if (m.psi.empty()) throw std::invalid_argument("empty observation set: recovery is unbounded");
  for (const auto& [i, c] : m.psi) {
    if (i < 0 || i >= m.n() || c < 0 || c >= meas::kColumns)
      throw std::invalid_argument("observation index out of range");
  }
}

}  // namespace

double default_delta(const meas::MeasurementMatrix& m) {
  double acc = 0.0;
  for (const auto& [i, c] : m.psi) {
    const double sigma = m.noise.for_column(c) * std::abs(m.values(i, c));
    acc += sigma * sigma;
  }
  return std::sqrt(acc);
}

ModelBuild build_model_mc(const meas::MeasurementMatrix& m) {
  check_meas(m);
  ModelBuild b = nuclear_core(m);
  for (const auto& [i, c] : m.psi) b.prog.add_equality(b.X(i, c) - LinExpr(m.values(i, c)));
  b.prog.set_objective(trace_objective(b));
  return b;
}

ModelBuild build_model_mcse(const meas::MeasurementMatrix& m, const net::LinearPowerFlowModel& lpf,
                            const SlackData& slack, const ToleranceConfig& tol_cfg, double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  if (lpf.n() != m.n()) throw std::invalid_argument("linear model / measurement size mismatch");
  check_meas(m);

  ModelBuild b = nuclear_core(m);
  b.tol_cfg = tol_cfg;
  if (delta > 0.0) {
    // noise ball; at delta == 0 the ball degenerates to exact equality
    b.prog.add_soc(LinExpr(delta), fit_residuals(b, m));
  } else {
    for (const auto& [i, c] : m.psi) b.prog.add_equality(b.X(i, c) - LinExpr(m.values(i, c)));
  }
  LinExpr loss = add_power_flow_block(b, lpf, slack);
  b.prog.set_objective(trace_objective(b) + loss);
  return b;
}

ModelBuild build_model_projection(const meas::MeasurementMatrix& m, int k, double lambda) {
  check_meas(m);
  if (k < 1 || k > meas::kColumns) throw std::invalid_argument("rank cap k must lie in {1..5}");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

  ModelBuild b;
  b.n = m.n();
  b.k = k;
  b.lambda = lambda;
  const int n = b.n, mm = meas::kColumns;

  b.X = b.prog.add_matrix("X", n, mm);
  b.Y = b.prog.add_symmetric("Y", n);
  b.U = b.prog.add_matrix("U", n, k);
  b.Theta = b.prog.add_symmetric("Theta", mm);

  MatExpr blk(n + mm, n + mm);
  for (int i = 0; i < n + mm; ++i)
    for (int j = 0; j < n + mm; ++j) blk.at(i, j) = w_entry(b, i, j);
  b.big_block = b.prog.add_psd(blk);
  b.has_big_block = true;

  MatExpr proj(n + k, n + k);
  for (int i = 0; i < n + k; ++i) {
    for (int j = 0; j < n + k; ++j) {
      if (i < n && j < n) proj.at(i, j) = (*b.Y)(i, j);
      else if (i >= n && j >= n) proj.at(i, j) = LinExpr(i == j ? 1.0 : 0.0);
      else if (i < n) proj.at(i, j) = (*b.U)(i, j - n);
      else proj.at(i, j) = (*b.U)(j, i - n);
    }
  }
  b.prog.add_psd(proj);

  MatExpr ypsd(n, n), iy(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ypsd.at(i, j) = (*b.Y)(i, j);
      iy.at(i, j) = LinExpr(i == j ? 1.0 : 0.0) - (*b.Y)(i, j);
    }
  }
  b.prog.add_psd(ypsd);
  b.prog.add_psd(iy);
  LinExpr trace;
  for (int i = 0; i < n; ++i) trace += (*b.Y)(i, i);
  b.prog.add_inequality(trace - LinExpr(static_cast<double>(k)));

  b.fit = b.prog.add_scalar("fit");
  b.prog.add_soc(*b.fit, fit_residuals(b, m));
  LinExpr obj = LinExpr(*b.fit);
  for (int j = 0; j < mm; ++j) obj += LinExpr((*b.Theta)(j, j)) * lambda;
  b.prog.set_objective(obj);
  return b;
}

ModelBuild build_model_pfpc(const meas::MeasurementMatrix& m, const net::LinearPowerFlowModel& lpf,
                            const SlackData& slack, int k, double lambda,
                            const ToleranceConfig& tol_cfg) {
  if (lpf.n() != m.n()) throw std::invalid_argument("linear model / measurement size mismatch");
  ModelBuild b = build_model_projection(m, k, lambda);
  b.tol_cfg = tol_cfg;
  LinExpr loss = add_power_flow_block(b, lpf, slack);

  LinExpr obj = LinExpr(*b.fit);
  for (int j = 0; j < meas::kColumns; ++j) obj += LinExpr((*b.Theta)(j, j)) * lambda;
  obj += loss;
  b.prog.set_objective(obj);
  return b;
}

conic::LinExpr w_entry(const ModelBuild& b, int a, int bcol) {
  const int n = b.n;
  const bool a_bus = a < n;
  const bool b_bus = bcol < n;
  if (a_bus && b_bus) return (*b.Y)(a, bcol);
  if (!a_bus && !b_bus) return (*b.Theta)(a - n, bcol - n);
  if (a_bus) return b.X(a, bcol - n);
  return b.X(bcol, a - n);
}

}  // namespace pfmc::models
