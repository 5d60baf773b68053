#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "pfmc/conic/check.hpp"
#include "pfmc/conic/compile.hpp"
#include "pfmc/conic/program.hpp"
#include "pfmc/conic/solver.hpp"

using namespace pfmc::conic;

namespace {

/// Nuclear-norm program for a fully observed matrix M.
ConicProgram nuclear_program(const Eigen::MatrixXd& M, MatrixVar* x_out = nullptr) {
  const int n = static_cast<int>(M.rows());
  const int m = static_cast<int>(M.cols());
  ConicProgram p;
  MatrixVar X = p.add_matrix("X", n, m);
  SymmetricVar D1 = p.add_symmetric("D1", n);
  SymmetricVar D2 = p.add_symmetric("D2", m);
  MatExpr blk(n + m, n + m);
  for (int i = 0; i < n + m; ++i) {
    for (int j = 0; j < n + m; ++j) {
      if (i < n && j < n) blk.at(i, j) = D1(i, j);
      else if (i >= n && j >= n) blk.at(i, j) = D2(i - n, j - n);
      else if (i < n) blk.at(i, j) = X(i, j - n);
      else blk.at(i, j) = X(j, i - n);
    }
  }
  p.add_psd(blk);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) p.add_equality(X(i, j) - LinExpr(M(i, j)));
  LinExpr obj;
  for (int i = 0; i < n; ++i) obj += D1(i, i);
  for (int j = 0; j < m; ++j) obj += D2(j, j);
  p.set_objective(obj);
  if (x_out) *x_out = X;
  return p;
}

}  // namespace

TEST_CASE("scalar psd block acts as nonnegativity") {
  ConicProgram p;
  auto x = p.add_scalar("x");
  MatExpr m(1, 1);
  m.at(0, 0) = LinExpr(x) + LinExpr(2.0);  // x + 2 >= 0
  p.add_psd(m);
  p.set_objective(x);
  auto r = solve(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("2x2 correlation block bounds the off-diagonal") {
  ConicProgram p;
  auto x = p.add_scalar("x");
  MatExpr m(2, 2);
  m.at(0, 0) = LinExpr(1.0);
  m.at(1, 1) = LinExpr(1.0);
  m.at(0, 1) = x;
  m.at(1, 0) = x;
  p.add_psd(m);
  SUBCASE("maximize") {
    p.set_objective(LinExpr(x) * -1.0);
    auto r = solve(p);
    REQUIRE(r.optimal());
    CHECK(r.value(x) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("minimize") {
    p.set_objective(x);
    auto r = solve(p);
    REQUIRE(r.optimal());
    CHECK(r.value(x) == doctest::Approx(-1.0).epsilon(1e-6));
  }
}

TEST_CASE("asymmetric psd body is rejected") {
  ConicProgram p;
  auto x = p.add_scalar("x");
  MatExpr m(2, 2);
  m.at(0, 0) = LinExpr(1.0);
  m.at(1, 1) = LinExpr(1.0);
  m.at(0, 1) = x;
  m.at(1, 0) = LinExpr(x) * 2.0;
  CHECK_THROWS_AS(p.add_psd(m), std::invalid_argument);
}

TEST_CASE("block psd dimension bookkeeping for a 3x2 inner matrix") {
  // [[D1, X], [X', D2]] with X 3x2 must compile to a 5x5 cone.
  ConicProgram p;
  auto X = p.add_matrix("X", 3, 2);
  auto D1 = p.add_symmetric("D1", 3);
  auto D2 = p.add_symmetric("D2", 2);
  MatExpr blk(5, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i < 3 && j < 3) blk.at(i, j) = D1(i, j);
      else if (i >= 3 && j >= 3) blk.at(i, j) = D2(i - 3, j - 3);
      else if (i < 3) blk.at(i, j) = X(i, j - 3);
      else blk.at(i, j) = X(j, i - 3);
    }
  }
  p.add_psd(blk);
  auto compiled = compile(p);
  REQUIRE(compiled.layout.psd_dim.size() == 1);
  CHECK(compiled.layout.psd_dim[0] == 5);
  CHECK(compiled.layout.rows() == 15);
}

TEST_CASE("soc boundary cases") {
  SUBCASE("t = 0 with zero vector is feasible") {
    ConicProgram p;
    auto t = p.add_scalar("t");
    p.add_equality(LinExpr(t));
    p.add_soc(t, {LinExpr(0.0), LinExpr(0.0)});
    p.set_objective(t);
    auto r = solve(p);
    CHECK(r.optimal());
  }
  SUBCASE("hypotenuse") {
    ConicProgram p;
    auto t = p.add_scalar("t");
    p.add_soc(t, {LinExpr(3.0), LinExpr(4.0)});
    p.set_objective(t);
    auto r = solve(p);
    REQUIRE(r.optimal());
    CHECK(r.objective == doctest::Approx(5.0).epsilon(1e-7));
  }
}

TEST_CASE("min trace on a coupled 2x2 block") {
  // min D s.t. [[D, 1], [1, D]] psd  ->  D* = 1
  ConicProgram p;
  auto d = p.add_scalar("D");
  MatExpr m(2, 2);
  m.at(0, 0) = d;
  m.at(1, 1) = d;
  m.at(0, 1) = LinExpr(1.0);
  m.at(1, 0) = LinExpr(1.0);
  p.add_psd(m);
  p.set_objective(d);
  auto r = solve(p);
  REQUIRE(r.optimal());
  CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("contradictory bounds report primal infeasibility") {
  ConicProgram p;
  auto x = p.add_scalar("x");
  p.add_inequality(LinExpr(1.0) - x);  // x >= 1
  p.add_inequality(x);                 // x <= 0
  p.set_objective(x);
  auto r = solve(p);
  CHECK(r.status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("nuclear-norm identity against the SVD oracle") {
  // optimum of the trace program halves to the nuclear norm
  std::mt19937_64 rng(20240811);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd M(8, 5);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 5; ++j) M(i, j) = g(rng);
    const double nuc = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues().sum();
    auto p = nuclear_program(M);
    auto r = solve(p);
    REQUIRE(r.optimal());
    CHECK(std::abs(r.objective / 2.0 - nuc) / nuc <= 1e-6);
  }
}

TEST_CASE("returned optima pass the independent residual audit") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(6, 4);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = g(rng);
  auto p = nuclear_program(M);
  auto r = solve(p);
  REQUIRE(r.optimal());
  auto chk = check_solution(p, r.x);
  CHECK(chk.worst() <= 5e-7);
  CHECK(r.check_violation == doctest::Approx(chk.worst()));
}

TEST_CASE("solver is deterministic") {
  Eigen::MatrixXd M(5, 3);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = g(rng);
  auto p = nuclear_program(M);
  auto r1 = solve(p);
  auto r2 = solve(p);
  REQUIRE(r1.optimal());
  REQUIRE(r2.optimal());
  CHECK(r1.iterations == r2.iterations);
  CHECK((r1.x - r2.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constraint handles support removal and replacement") {
  ConicProgram p;
  auto x = p.add_scalar("x");
  auto h = p.add_inequality(LinExpr(3.0) - x);  // x >= 3
  p.add_inequality(LinExpr(1.0) - x);           // x >= 1
  p.set_objective(x);
  auto r = solve(p);
  REQUIRE(r.optimal());
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-6));
  REQUIRE(p.remove(h));
  CHECK_FALSE(p.has_constraint(h));
  auto r2 = solve(p);
  REQUIRE(r2.optimal());
  CHECK(r2.objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("json round-trip preserves the program") {
  ConicProgram p;
  auto x = p.add_scalar("x", 0.0, 5.0);
  auto X = p.add_matrix("X", 2, 3);
  auto S = p.add_symmetric("S", 2);
  MatExpr blk(2, 2);
  blk.at(0, 0) = S(0, 0);
  blk.at(1, 1) = S(1, 1);
  blk.at(0, 1) = X(0, 0) + LinExpr(0.5);
  blk.at(1, 0) = X(0, 0) + LinExpr(0.5);
  p.add_psd(blk);
  p.add_soc(x, {X(1, 2) - LinExpr(1.0), X(0, 1)});
  p.add_equality(X(1, 0) - LinExpr(2.0));
  p.set_objective(LinExpr(x) + LinExpr(S(0, 0)) * 3.0);

  const std::string text = p.to_json();
  ConicProgram q = ConicProgram::from_json(text);
  CHECK(p == q);
  // canonical ordering: a second round-trip serializes identically
  CHECK(q.to_json() == text);
}

TEST_CASE("time limit returns a time-limit status") {
  // a feasible but slow-converging instance with a microscopic budget
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::MatrixXd M(10, 5);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 5; ++j) M(i, j) = g(rng);
  auto p = nuclear_program(M);
  SolveSettings s;
  s.time_limit_sec = 1e-6;
  s.check_interval = 1;
  auto r = solve(p, s);
  CHECK(r.status == SolveStatus::TimeLimit);
}
