#include "pfmc/models/extract.hpp"

#include <cmath>

#include "pfmc/bench/mape.hpp"

namespace pfmc::models {

EstimationResult extract_state(const ModelBuild& build, const conic::SolveReport& report,
                               const meas::MeasurementMatrix& m) {
  EstimationResult r;
  r.status = report.status;
  r.solve_time_sec = report.wall_time_sec;
  r.iterations = report.iterations;
  r.objective = report.objective;
  if (!report.optimal()) return r;

  r.X = report.value(build.X);
  const int n = build.n;
  r.voltages.resize(n);
  for (int i = 0; i < n; ++i) r.voltages[i] = net::Complex(r.X(i, meas::kReV), r.X(i, meas::kImV));
  r.vmag = r.X.col(meas::kMagV);

  r.mape_vmag = bench::mape(r.vmag, m.ground_truth.col(meas::kMagV));

  // Phase error is supplementary; truth angles can pass through zero, in
  // which case the percentage is left undefined.
  Eigen::VectorXd true_phase(n), est_phase(n);
  bool phase_ok = true;
  for (int i = 0; i < n; ++i) {
    true_phase[i] =
        std::atan2(m.ground_truth(i, meas::kImV), m.ground_truth(i, meas::kReV));
    est_phase[i] = std::arg(r.voltages[i]);
    if (true_phase[i] == 0.0) phase_ok = false;
  }
  if (phase_ok) r.mape_phase = bench::mape(est_phase, true_phase);

  double fit2 = 0.0;
  for (const auto& [i, c] : m.psi) {
    const double diff = r.X(i, c) - m.values(i, c);
    fit2 += diff * diff;
  }
  r.parts.fit_norm = std::sqrt(fit2);

  if (build.Theta) {
    const Eigen::MatrixXd th = report.value(*build.Theta);
    r.parts.theta_trace = th.trace();
  }

  const ToleranceConfig& tc = build.tol_cfg;
  auto loss_of = [&](double v) { return tc.loss == Loss::L1 ? std::abs(v) : v * v; };
  double tol_loss = 0.0;
  for (const auto& v : build.tau_re) tol_loss += tc.w_tau_re * loss_of(report.value(v));
  for (const auto& v : build.tau_im) tol_loss += tc.w_tau_im * loss_of(report.value(v));
  for (const auto& v : build.gamma) tol_loss += tc.w_gamma * loss_of(report.value(v));
  if (build.alpha_re) tol_loss += tc.w_alpha_re * loss_of(report.value(*build.alpha_re));
  if (build.alpha_im) tol_loss += tc.w_alpha_im * loss_of(report.value(*build.alpha_im));
  r.parts.tolerance_loss = tol_loss;
  return r;
}

}  // namespace pfmc::models
