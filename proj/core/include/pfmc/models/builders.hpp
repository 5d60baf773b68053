#pragma once

#include <optional>

#include "pfmc/conic/program.hpp"
#include "pfmc/meas/measurement.hpp"
#include "pfmc/net/admittance.hpp"
#include "pfmc/net/linear_model.hpp"

namespace pfmc::models {

enum class Loss { L1, SquaredL2 };

/// Weights for the power-flow tolerance variables and the loss applied to
/// them in the objective.
struct ToleranceConfig {
  Loss loss = Loss::L1;
  double w_tau_re = 1.0;
  double w_tau_im = 1.0;
  double w_gamma = 1.0;
  double w_alpha_re = 1.0;
  double w_alpha_im = 1.0;
};

/// Slack-bus data entering the power-flow block; the slack power term is
/// included only when an s0 measurement exists (it needs the slack row of
/// the admittance matrix).
struct SlackData {
  net::Complex v0{1.0, 0.0};
  std::optional<net::Complex> s0;
  net::Complex y00{0.0, 0.0};
  Eigen::RowVectorXcd y0l;

  static SlackData from_partition(const net::AdmittancePartition& part, net::Complex v0,
                                  std::optional<net::Complex> s0);
};

/// A built estimation model: the conic program plus the variable handles
/// needed to read solutions back and to rewrite the big PSD block.
struct ModelBuild {
  conic::ConicProgram prog;
  int n = 0;
  int k = 0;
  double lambda = 0.0;
  ToleranceConfig tol_cfg;

  conic::MatrixVar X;  // n x 5 recovered measurement matrix

  // Nuclear-norm models (1)/(2).
  std::optional<conic::SymmetricVar> D1, D2;

  // Projection models (3)/(4).
  std::optional<conic::SymmetricVar> Y, Theta;
  std::optional<conic::MatrixVar> U;
  std::optional<conic::ScalarVar> fit;  // epigraph of ||X_psi - M_psi||_F

  // Power-flow tolerance variables (models (2)/(4)).
  std::vector<conic::ScalarVar> tau_re, tau_im, gamma;
  std::optional<conic::ScalarVar> alpha_re, alpha_im;

  // Handle of the full [[Y, X], [X', Theta]] block, target of the sparse
  // rewriting.
  conic::ConstraintHandle big_block{};
  bool has_big_block = false;
};

/// Exact-equality nuclear-norm completion.
ModelBuild build_model_mc(const meas::MeasurementMatrix& m);

/// Nuclear-norm completion with power-flow tolerances and a noise ball of
/// radius delta (delta == 0 degenerates to exact equality on psi).
ModelBuild build_model_mcse(const meas::MeasurementMatrix& m, const net::LinearPowerFlowModel& lpf,
                            const SlackData& slack, const ToleranceConfig& tol_cfg, double delta);

/// Projection conic completion with rank cap k and trace weight lambda.
ModelBuild build_model_projection(const meas::MeasurementMatrix& m, int k, double lambda);

/// Power-flow-embedded projection conic model.
ModelBuild build_model_pfpc(const meas::MeasurementMatrix& m, const net::LinearPowerFlowModel& lpf,
                            const SlackData& slack, int k, double lambda,
                            const ToleranceConfig& tol_cfg);

/// Entry (a, b) of the stacked block W = [[Y, X], [X', Theta]] as an
/// expression over the build's variables (indices 0..n+4).
conic::LinExpr w_entry(const ModelBuild& b, int a, int bcol);

/// Default noise-ball radius: expected Frobenius norm of the observation
/// noise under the configured relative standard deviations.
double default_delta(const meas::MeasurementMatrix& m);

}  // namespace pfmc::models
