#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "pfmc/conic/check.hpp"
#include "pfmc/conic/cones.hpp"
#include "pfmc/conic/compile.hpp"
#include "pfmc/conic/solver.hpp"

namespace pfmc::conic {

namespace {

using Clock = std::chrono::steady_clock;
using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct Scaling {
  Vec D;  // row scaling, length m
  Vec E;  // col scaling, length n
  double sb = 1.0;
  double sc = 1.0;
};

// Ruiz equilibration; rows belonging to one SOC/PSD block share a scale so
// cone membership is preserved.
Scaling equilibrate(SpMat& A, Vec& b, Vec& c, const ConeLayout& layout) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Scaling s;
  s.D = Vec::Ones(m);
  s.E = Vec::Ones(n);

  // (block start, block length) for every cone row group.
  std::vector<std::pair<int, int>> groups;
  for (int i = 0; i < layout.zero + layout.nonneg; ++i) groups.emplace_back(i, 1);
  int off = layout.zero + layout.nonneg;
  for (int q : layout.soc) {
    groups.emplace_back(off, q);
    off += q;
  }
  for (int d : layout.psd_dim) {
    groups.emplace_back(off, svec_len(d));
    off += svec_len(d);
  }

  Vec rmax(m), cmax(n);
  for (int sweep = 0; sweep < 10; ++sweep) {
    rmax.setZero();
    cmax.setZero();
    for (int j = 0; j < A.outerSize(); ++j) {
      for (SpMat::InnerIterator it(A, j); it; ++it) {
        const double a = std::abs(it.value());
        rmax[it.row()] = std::max(rmax[it.row()], a);
        cmax[j] = std::max(cmax[j], a);
      }
    }
    Vec dr = Vec::Ones(m), dc = Vec::Ones(n);
    for (auto [start, len] : groups) {
      double g = 0.0;
      for (int i = 0; i < len; ++i) g = std::max(g, rmax[start + i]);
      const double f = (g > 1e-12) ? 1.0 / std::sqrt(g) : 1.0;
      for (int i = 0; i < len; ++i) dr[start + i] = f;
    }
    for (int j = 0; j < n; ++j) {
      if (cmax[j] > 1e-12) dc[j] = 1.0 / std::sqrt(cmax[j]);
    }
    for (int j = 0; j < A.outerSize(); ++j) {
      for (SpMat::InnerIterator it(A, j); it; ++it) {
        it.valueRef() *= dr[it.row()] * dc[j];
      }
    }
    s.D.array() *= dr.array();
    s.E.array() *= dc.array();
  }

  b.array() *= s.D.array();
  c.array() *= s.E.array();
  const double nb = b.norm();
  const double nc = c.norm();
  s.sb = (nb > 1e-10) ? 1.0 / nb : 1.0;
  s.sc = (nc > 1e-10) ? 1.0 / nc : 1.0;
  s.sb = std::clamp(s.sb, 1e-6, 1e6);
  s.sc = std::clamp(s.sc, 1e-6, 1e6);
  b *= s.sb;
  c *= s.sc;
  return s;
}

class AdmmSolver final : public SolverBackend {
 public:
  std::string name() const override { return "admm"; }
  SolveReport solve(const ConicProgram& prog, const SolveSettings& settings) override;
};

struct Workspace {
  int n = 0, m = 0;
  SpMat A, At;
  Vec b, c;
  ConeLayout layout;
  Scaling scal;
  Eigen::SimplicialLLT<SpMat> llt;
  Vec gx, gy;  // cached solve against (c, b)
  double g_denom = 1.0;

  // Solves (I + A^T A) p = rhs.
  Vec normal_solve(const Vec& rhs) const { return llt.solve(rhs); }

  // Solves the 2x2 system [[I, A^T], [-A, I]] (px, py) = (h1, h2).
  void kkt_solve(const Vec& h1, const Vec& h2, Vec& px, Vec& py) const {
    px = normal_solve(h1 - At * h2);
    py = h2 + A * px;
  }
};

struct Iterate {
  Vec ux, uy, vs;
  double utau = 1.0, vkappa = 1.0;
};

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal-infeasible";
    case SolveStatus::DualInfeasible: return "dual-infeasible";
    case SolveStatus::NumericalFailure: return "numerical-failure";
    case SolveStatus::TimeLimit: return "time-limit";
  }
  return "unknown";
}

Eigen::MatrixXd SolveReport::value(const MatrixVar& v) const {
  Eigen::MatrixXd out(v.rows(), v.cols());
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j) out(i, j) = x[v.index(i, j)];
  return out;
}

Eigen::MatrixXd SolveReport::value(const SymmetricVar& v) const {
  Eigen::MatrixXd out(v.dim(), v.dim());
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j <= i; ++j) out(i, j) = out(j, i) = x[v.index(i, j)];
  return out;
}

SolveReport AdmmSolver::solve(const ConicProgram& prog, const SolveSettings& settings) {
  const auto t_start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t_start).count(); };

  SolveReport rep;
  Compiled compiled = compile(prog);

  Workspace w;
  w.n = static_cast<int>(compiled.A.cols());
  w.m = static_cast<int>(compiled.A.rows());
  w.layout = compiled.layout;
  w.A = compiled.A;
  w.b = compiled.b;
  w.c = compiled.c;
  w.scal = equilibrate(w.A, w.b, w.c, w.layout);
  w.At = w.A.transpose();

  {
    SpMat G = (w.At * w.A).pruned();
    SpMat I(w.n, w.n);
    I.setIdentity();
    G = (G + I).pruned();
    w.llt.compute(G);
    if (w.llt.info() != Eigen::Success) {
      rep.status = SolveStatus::NumericalFailure;
      rep.detail = "normal-equation factorization failed";
      rep.wall_time_sec = elapsed();
      return rep;
    }
  }
  w.kkt_solve(w.c, w.b, w.gx, w.gy);
  w.g_denom = 1.0 + w.c.dot(w.gx) + w.b.dot(w.gy);
  if (!(w.g_denom > 1e-12)) {
    rep.status = SolveStatus::NumericalFailure;
    rep.detail = "degenerate homogeneous embedding";
    rep.wall_time_sec = elapsed();
    return rep;
  }

  ConeProjector projector(w.layout);

  const int n = w.n, m = w.m;
  const int dim = n + m + 1;  // homogeneous iterate (x, y, tau)

  // State: u = (x, y, tau) in C = R^n x K* x R+, v = (0, s, kappa) in C*.
  Vec u = Vec::Zero(dim), v = Vec::Zero(dim);
  u[dim - 1] = 1.0;
  v[dim - 1] = 1.0;

  Vec ut(dim), rhs1(n), rhs2(m), px(n), py(m), t(dim), uv(dim);
  Vec f(dim * 2), state(dim * 2);

  // Anderson acceleration history.
  const int mem = std::max(0, settings.accel_memory);
  Eigen::MatrixXd dX, dF;
  Vec f_prev, x_prev;
  int aa_count = 0;
  if (mem > 0) {
    dX.resize(2 * dim, mem);
    dF.resize(2 * dim, mem);
    f_prev.resize(2 * dim);
    x_prev.resize(2 * dim);
  }
  double last_fnorm = std::numeric_limits<double>::infinity();
  double best_fnorm = std::numeric_limits<double>::infinity();
  bool have_plain_backup = false;
  Vec backup_u(dim), backup_v(dim);

  const double alpha = settings.over_relax;

  // Termination bookkeeping (original-scale data).
  const SpMat& A0 = compiled.A;
  const Vec& b0 = compiled.b;
  const Vec& c0 = compiled.c;
  const double b0n = b0.norm(), c0n = c0.norm();
  SpMat A0t = A0.transpose();

  auto one_step = [&](Vec& U, Vec& V) {
    // ut = (I+Q)^{-1} (U + V)
    uv = U + V;
    rhs1 = uv.head(n);
    rhs2 = uv.segment(n, m);
    const double h3 = uv[dim - 1];
    w.kkt_solve(rhs1, rhs2, px, py);
    const double tau_t = (h3 + w.c.dot(px) + w.b.dot(py)) / w.g_denom;
    ut.head(n) = px - tau_t * w.gx;
    ut.segment(n, m) = py - tau_t * w.gy;
    ut[dim - 1] = tau_t;

    // over-relaxation, projection, dual update
    t = alpha * ut + (1.0 - alpha) * U;
    Vec proj = t - V;
    // x block free; y block onto K*; tau onto R+.
    projector.project_dual(proj.segment(n, m));
    if (proj[dim - 1] < 0.0) proj[dim - 1] = 0.0;
    V += proj - t;
    U = std::move(proj);
  };

  long iter = 0;
  SolveStatus status = SolveStatus::TimeLimit;
  std::string detail;

  auto make_solution = [&](SolveStatus st, const std::string& why) {
    rep.status = st;
    rep.detail = why;
    rep.iterations = iter;
    const double tau = u[dim - 1];
    if (tau > 1e-12) {
      // unscale: x = E x~ / (sb tau), y = D y~ / (sc tau), s = D^{-1} s~ / (sb tau)
      Vec xs = u.head(n) / tau;
      Vec ys = u.segment(n, m) / tau;
      rep.x = (w.scal.E.array() * xs.array()).matrix() / w.scal.sb;
      rep.dual = (w.scal.D.array() * ys.array()).matrix() / w.scal.sc;
      rep.objective = c0.dot(rep.x);
    } else {
      rep.x = Vec::Zero(n);
      rep.dual = Vec::Zero(m);
    }
    rep.wall_time_sec = elapsed();
  };

  const long max_iters = settings.max_iters;
  for (iter = 1; iter <= max_iters; ++iter) {
    const bool checking = (iter % settings.check_interval == 0) || iter == max_iters;

    if (mem > 0) {
      state.head(dim) = u;
      state.tail(dim) = v;
      Vec u_next = u, v_next = v;
      one_step(u_next, v_next);
      f.head(dim) = u_next - u;
      f.tail(dim) = v_next - v;
      const double fnorm = f.norm();

      // Retrospective safeguard: if the accelerated path made the residual
      // grow, fall back to the stored plain iterate and flush the history.
      best_fnorm = std::min(best_fnorm * 1.02, std::numeric_limits<double>::max());
      if (have_plain_backup && aa_count > 0 &&
          (fnorm > 1.5 * last_fnorm || fnorm > 3.0 * best_fnorm)) {
        u = backup_u;
        v = backup_v;
        aa_count = 0;
        have_plain_backup = false;
        one_step(u, v);
        last_fnorm = std::numeric_limits<double>::infinity();
        continue;
      }
      last_fnorm = fnorm;
      best_fnorm = std::min(best_fnorm, fnorm);

      backup_u = u_next;
      backup_v = v_next;
      have_plain_backup = true;

      if (aa_count > 0) {
        const int cols = std::min(aa_count, mem);
        const int newest = (aa_count - 1) % mem;
        dX.col(newest) = state - x_prev;
        dF.col(newest) = f - f_prev;
        Eigen::MatrixXd W = dF.leftCols(std::min(cols, mem));
        // Solve the small regularized least-squares for the mixing weights.
        Eigen::MatrixXd M = W.transpose() * W;
        M.diagonal().array() += 1e-12 + 1e-10 * M.trace();
        Vec gamma = M.ldlt().solve(W.transpose() * f);
        Vec accel = state + f;
        for (int k = 0; k < W.cols(); ++k) accel -= gamma[k] * (dX.col(k) + dF.col(k));
        u = accel.head(dim);
        v = accel.tail(dim);
      } else {
        u = u_next;
        v = v_next;
      }
      x_prev = state;
      f_prev = f;
      ++aa_count;
      if (aa_count > 10000) aa_count = mem + 1;  // avoid overflow games
    } else {
      one_step(u, v);
    }

    if (!checking) continue;

    if (!u.allFinite() || !v.allFinite()) {
      status = SolveStatus::NumericalFailure;
      detail = "non-finite iterate";
      break;
    }

    const double tau = u[dim - 1];
    const double kappa = v[dim - 1];

    if (tau > 1e-9) {
      // Candidate solution in original scale.
      Vec x = (w.scal.E.array() * u.head(n).array()).matrix() / (w.scal.sb * tau);
      Vec y = (w.scal.D.array() * u.segment(n, m).array()).matrix() / (w.scal.sc * tau);
      Vec s = (v.segment(n, m).array() / w.scal.D.array()).matrix() / (w.scal.sb * tau);

      const double pres = (A0 * x + s - b0).norm() / (1.0 + b0n);
      const double dres = (A0t * y + c0).norm() / (1.0 + c0n);
      const double pobj = c0.dot(x);
      const double dobj = -b0.dot(y);
      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

      rep.residuals = {pres, dres, gap};
      if (settings.verbose && iter % (settings.check_interval * 40) == 0) {
        std::fprintf(stderr, "iter %6ld  pres %.2e  dres %.2e  gap %.2e\n", iter, pres, dres, gap);
      }

      if (pres <= settings.feas_tol && dres <= settings.feas_tol && gap <= settings.gap_tol) {
        status = SolveStatus::Optimal;
        break;
      }
    }

    // Infeasibility certificates (scaled by any positive factor).
    if (kappa > 1e-9 * std::max(1.0, tau)) {
      Vec y = (w.scal.D.array() * u.segment(n, m).array()).matrix() / w.scal.sc;
      const double bty = b0.dot(y);
      if (bty < -1e-12) {
        const double unb = (A0t * y).norm() * std::max(1.0, b0n) / (-bty);
        if (unb <= settings.feas_tol) {
          status = SolveStatus::PrimalInfeasible;
          detail = "Farkas certificate";
          break;
        }
      }
      Vec x = (w.scal.E.array() * u.head(n).array()).matrix();
      const double ctx = c0.dot(x);
      if (ctx < -1e-12) {
        Vec s = (v.segment(n, m).array() / w.scal.D.array()).matrix();
        const double unb = (A0 * x + s).norm() * std::max(1.0, c0n) / (-ctx);
        if (unb <= settings.feas_tol) {
          status = SolveStatus::DualInfeasible;
          detail = "unboundedness certificate";
          break;
        }
      }
    }

    if (settings.time_limit_sec > 0.0 && elapsed() > settings.time_limit_sec) {
      status = SolveStatus::TimeLimit;
      detail = "time limit reached";
      break;
    }
    if (iter == max_iters) {
      status = SolveStatus::TimeLimit;
      detail = "iteration budget exhausted";
      break;
    }
  }

  make_solution(status, detail);

  if (rep.status == SolveStatus::Optimal) {
    // Independent audit of the returned point against the original program.
    CheckReport chk = check_solution(prog, rep.x);
    rep.check_violation = chk.worst();
    // The audit normalizes per constraint; allow modest aggregation slack
    // relative to the l2-aggregated stopping rule.
    if (!chk.passes(50.0 * settings.feas_tol)) {
      rep.status = SolveStatus::NumericalFailure;
      rep.detail = "solution failed independent residual audit: " + chk.summary();
    }
  }
  return rep;
}

std::unique_ptr<SolverBackend> make_solver(const std::string& name) {
  if (name == "admm") return std::make_unique<AdmmSolver>();
  throw std::invalid_argument("unknown solver backend: " + name);
}

SolveReport solve(const ConicProgram& prog, const SolveSettings& settings) {
  return make_solver()->solve(prog, settings);
}

}  // namespace pfmc::conic
