#include "pfmc/bnb/bnb.hpp"

#include <chrono>
#include <cmath>
#include <queue>

#include "pfmc/models/builders.hpp"

namespace pfmc::bnb {

namespace {

using Clock = std::chrono::steady_clock;

struct QueueEntry {
  double bound;
  long id;
  SearchNode node;
  bool operator>(const QueueEntry& o) const {
    if (bound != o.bound) return bound > o.bound;
    return id > o.id;
  }
};

/// Finds an ancestor cut matching (column, direction); directions carry a
/// canonical sign so equality is a plain dot-product test.
int find_matching_cut(const std::vector<IntervalCut>& cuts, int column,
                      const Eigen::VectorXd& z) {
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i].column != column) continue;
    if (std::abs(cuts[i].z.dot(z)) > 1.0 - 1e-9) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

BnbResult bnb_solve(const meas::MeasurementMatrix& m, const net::LinearPowerFlowModel& lpf,
                    const models::SlackData& slack, int k, double lambda,
                    const models::SubmatrixPlan& plan, const models::ToleranceConfig& tol_cfg,
                    const Limits& limits, const conic::SolveSettings& solver_settings,
                    TraceSink trace) {
  const auto t_start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t_start).count(); };

  BnbResult out;
  SearchStats& stats = out.stats;

  // Base node model: the power-flow-embedded projection model with the big
  // block rewritten per plan (or kept whole for the A/B reference mode).
  models::ModelBuild base = models::build_model_pfpc(m, lpf, slack, k, lambda, tol_cfg);
  if (!limits.node_full_psd) base = models::apply_sparse_psd(std::move(base), plan);

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  long next_id = 0;
  open.push({-std::numeric_limits<double>::infinity(), next_id++, SearchNode{}});

  // Cut rows add no variables, so `base`'s handles read any node's report.
  std::optional<conic::SolveReport> incumbent_report;
  double incumbent_obj = std::numeric_limits<double>::infinity();
  std::optional<conic::SolveReport> best_relax_report;  // fallback when no incumbent
  double best_relax_residual = std::numeric_limits<double>::infinity();
  double best_open_bound = std::numeric_limits<double>::quiet_NaN();

  auto emit = [&](const SearchNode& node, double bound, double residual, const char* action) {
    if (trace) trace({node.id, node.depth, bound, residual, action});
  };

  while (!open.empty()) {
    if (stats.nodes_explored >= limits.max_nodes) break;
    if (limits.time_limit_sec > 0.0 && elapsed() > limits.time_limit_sec) break;

    QueueEntry entry = open.top();
    open.pop();
    SearchNode node = std::move(entry.node);
    node.id = entry.id;

    // Bound-based fathoming against the incumbent.
    if (incumbent_report &&
        entry.bound >= incumbent_obj - limits.gap_tol * std::max(1.0, std::abs(incumbent_obj))) {
      emit(node, entry.bound, std::numeric_limits<double>::quiet_NaN(), "fathomed-bound");
      continue;
    }

    // Node model = base + ancestor interval cuts.
    models::ModelBuild nb = base;
    for (const auto& cut : node.cuts) add_secant_cut(nb, cut);

    conic::SolveSettings settings = solver_settings;
    if (limits.time_limit_sec > 0.0) {
      const double remain = limits.time_limit_sec - elapsed();
      if (remain <= 0.0) break;
      settings.time_limit_sec =
          settings.time_limit_sec > 0.0 ? std::min(settings.time_limit_sec, remain) : remain;
    }
    conic::SolveReport rep = conic::solve(nb.prog, settings);
    ++stats.nodes_explored;

    if (rep.status == conic::SolveStatus::PrimalInfeasible) {
      emit(node, entry.bound, std::numeric_limits<double>::quiet_NaN(), "fathomed-infeasible");
      continue;
    }
    if (!rep.optimal()) {
      ++stats.solver_failures;
      emit(node, entry.bound, std::numeric_limits<double>::quiet_NaN(), "failed");
      continue;
    }

    const double bound = rep.objective;
    node.bound = bound;
    if (incumbent_report &&
        bound >= incumbent_obj - limits.gap_tol * std::max(1.0, std::abs(incumbent_obj))) {
      emit(node, bound, std::numeric_limits<double>::quiet_NaN(), "fathomed-bound");
      continue;
    }

    const Eigen::MatrixXd Y = rep.value(*nb.Y);
    const Eigen::MatrixXd U = rep.value(*nb.U);
    ProjectionGap gap = projection_gap(Y, U);
    if (gap.residual < best_relax_residual) {
      best_relax_residual = gap.residual;
      best_relax_report = rep;
    }

    if (gap.residual <= limits.eps_proj) {
      // Feasible for the nonconvex projection set: incumbent candidate.
      if (bound < incumbent_obj) {
        incumbent_obj = bound;
        incumbent_report = rep;
        stats.incumbent_found = true;
        stats.incumbent_node = node.id;
        stats.incumbent_residual = gap.residual;
      }
      emit(node, bound, gap.residual, "incumbent");
      continue;
    }

    // Branch: column with the largest projection of U on z; for k = 1 this
    // is always the single column.
    int column = 0;
    double best_contrib = -1.0;
    for (int c = 0; c < k; ++c) {
      double uz = 0.0;
      for (int p = 0; p < nb.n; ++p) uz += U(p, c) * gap.z[p];
      const double contrib = uz * uz;
      if (contrib > best_contrib) {
        best_contrib = contrib;
        column = c;
      }
    }
    double t_hat = 0.0;
    for (int p = 0; p < nb.n; ++p) t_hat += U(p, column) * gap.z[p];

    IntervalCut parent_cut;
    parent_cut.column = column;
    parent_cut.z = gap.z;
    int existing = find_matching_cut(node.cuts, column, gap.z);
    if (existing >= 0) {
      parent_cut = node.cuts[existing];
      if (std::abs(parent_cut.z.dot(gap.z)) > 1.0 - 1e-9 && parent_cut.z.dot(gap.z) < 0.0) {
        // canonical signs should prevent this; guard anyway
        parent_cut.z = gap.z;
      }
    }

    if (parent_cut.hi - parent_cut.lo < 1e-9) {
      emit(node, bound, gap.residual, "degenerate");
      continue;  // numerically exhausted interval
    }

    auto [left, right] = split_cut(parent_cut, t_hat);
    for (const IntervalCut& child_cut : {left, right}) {
      SearchNode child;
      child.cuts = node.cuts;
      if (existing >= 0) child.cuts[existing] = child_cut;
      else child.cuts.push_back(child_cut);
      child.depth = node.depth + 1;
      child.bound = bound;
      open.push({bound, next_id++, std::move(child)});
    }
    emit(node, bound, gap.residual, "branched");
  }

  stats.wall_time_sec = elapsed();
  best_open_bound = open.empty() ? incumbent_obj : open.top().bound;

  const meas::MeasurementMatrix& meas_ref = m;
  if (incumbent_report) {
    out.estimate = models::extract_state(base, *incumbent_report, meas_ref);
    stats.final_gap = std::max(0.0, incumbent_obj - best_open_bound) /
                      std::max(1.0, std::abs(incumbent_obj));
  } else if (best_relax_report) {
    // No feasible incumbent within limits: return the relaxation point
    // closest to the projection set, flagged bound-only.
    out.estimate = models::extract_state(base, *best_relax_report, meas_ref);
    stats.bound_only = true;
    stats.incumbent_residual = best_relax_residual;
  } else {
    stats.bound_only = true;
  }
  return out;
}

}  // namespace pfmc::bnb
