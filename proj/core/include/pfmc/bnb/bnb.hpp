#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pfmc/models/extract.hpp"
#include "pfmc/models/submatrix.hpp"

namespace pfmc::bnb {

/// Interval restriction of U_col along direction z, enforced through the
/// secant over-estimator of (U_col' z)^2 plus the interval box.
struct IntervalCut {
  int column = 0;
  Eigen::VectorXd z;  // unit direction, canonical sign
  double lo = -1.0;
  double hi = 1.0;
};

struct SearchNode {
  std::vector<IntervalCut> cuts;
  double bound = -std::numeric_limits<double>::infinity();
  int depth = 0;
  long id = 0;
};

struct Limits {
  long max_nodes = 50;
  double time_limit_sec = 600.0;
  double gap_tol = 1e-3;     // relative incumbent/bound gap
  double eps_proj = 1e-4;    // Frobenius feasibility of Y = U U'
  bool node_full_psd = false;  // solve the un-rewritten block at each node
};

struct SearchStats {
  long nodes_explored = 0;
  double final_gap = std::numeric_limits<double>::quiet_NaN();
  double wall_time_sec = 0.0;
  bool incumbent_found = false;
  long incumbent_node = -1;
  double incumbent_residual = std::numeric_limits<double>::quiet_NaN();
  bool bound_only = false;  // no feasible incumbent within limits
  long solver_failures = 0;
};

/// Per-node trace record for the JSON-lines stream.
struct NodeTrace {
  long id = 0;
  int depth = 0;
  double bound = 0.0;
  double residual = 0.0;
  std::string action;  // solved | fathomed-bound | fathomed-infeasible |
                       // incumbent | branched | degenerate | failed
};
using TraceSink = std::function<void(const NodeTrace&)>;

struct BnbResult {
  models::EstimationResult estimate;
  SearchStats stats;
};

/// Emits the secant rows for a cut: z'Yz <= (lo+hi)(U_col' z) - lo*hi and
/// the box lo <= U_col' z <= hi.
void add_secant_cut(models::ModelBuild& build, const IntervalCut& cut);

/// Splits the parent interval at t_hat (midpoint when t_hat collides with
/// an endpoint within 1e-9). Returns the two child intervals.
std::pair<IntervalCut, IntervalCut> split_cut(const IntervalCut& parent, double t_hat);

/// Largest-|eigenvalue| eigenvector of Yhat - Uhat Uhat' and its
/// Frobenius-norm violation.
struct ProjectionGap {
  Eigen::VectorXd z;
  double residual = 0.0;
  double leading = 0.0;
};
ProjectionGap projection_gap(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& U);

/// Branch-and-bound over eigenvector disjunctions; each node solves the
/// sparse-PSD node model with the ancestors' interval cuts.
BnbResult bnb_solve(const meas::MeasurementMatrix& m, const net::LinearPowerFlowModel& lpf,
                    const models::SlackData& slack, int k, double lambda,
                    const models::SubmatrixPlan& plan, const models::ToleranceConfig& tol_cfg,
                    const Limits& limits, const conic::SolveSettings& solver_settings,
                    TraceSink trace = nullptr);

}  // namespace pfmc::bnb
