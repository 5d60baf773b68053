#include <doctest.h>

#include <Eigen/SVD>
#include <cstdlib>

#include "pfmc/meas/measurement.hpp"
#include "pfmc/net/ac_solver.hpp"

using namespace pfmc;
using meas::Index;

namespace {
std::string data_dir() {
  const char* env = std::getenv("PFMC_DATA_DIR");
  return env ? env : "data";
}
}  // namespace

TEST_CASE("flat-start row layout") {
  Eigen::VectorXcd v(1), s(1);
  v[0] = {1.0, 0.0};
  s[0] = {0.0, 0.0};
  auto M = meas::build_measurement_matrix(v, s);
  REQUIRE(M.rows() == 1);
  CHECK(M(0, 0) == 1.0);
  CHECK(M(0, 1) == 0.0);
  CHECK(M(0, 2) == 1.0);
  CHECK(M(0, 3) == 0.0);
  CHECK(M(0, 4) == 0.0);
}

TEST_CASE("magnitude column equals hypot of the phasor columns") {
  auto c = net::load_case(data_dir() + "/case4.case");
  auto sol = net::solve_ac_power_flow(c);
  Eigen::VectorXcd s(3);
  const auto inj = c.load_injections();
  for (int i = 0; i < 3; ++i) s[i] = inj[i];
  auto M = meas::build_measurement_matrix(sol.v, s);
  for (int i = 0; i < M.rows(); ++i) {
    CHECK(M(i, 2) == doctest::Approx(std::hypot(M(i, 0), M(i, 1))).epsilon(1e-14));
  }
}

TEST_CASE("141-bus measurement matrix is numerically near-low-rank") {
  auto c = net::load_case(data_dir() + "/case141.case");
  auto m = meas::make_scenario(c, 1.0, 1);
  REQUIRE(m.ground_truth.rows() == 140);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.ground_truth);
  const auto& sv = svd.singularValues();
  REQUIRE(sv.size() == 5);  // rank <= 5 by construction
  // voltage-dominated columns leave the tail singular values tiny
  CHECK(sv[2] / sv[0] <= 0.05);
  CHECK((sv[3] + sv[4]) / sv[0] <= 0.05);
}

TEST_CASE("mask hits the target count and is deterministic") {
  const int n = 140;
  auto psi = meas::apply_fad_mask(n, 0.32, 7);
  CHECK(psi.size() == 224);  // round(0.32 * 700)
  auto psi2 = meas::apply_fad_mask(n, 0.32, 7);
  CHECK(psi == psi2);
  auto psi3 = meas::apply_fad_mask(n, 0.32, 8);
  CHECK(psi != psi3);
  for (const auto& [i, c] : psi) {
    CHECK(i >= 0);
    CHECK(i < n);
    CHECK(c >= 0);
    CHECK(c < 5);
  }
}

TEST_CASE("full observability keeps every entry") {
  auto psi = meas::apply_fad_mask(12, 1.0, 3);
  CHECK(psi.size() == 60);
}

TEST_CASE("fad accuracy within one slot") {
  for (double fad : {0.1, 0.32, 0.5, 0.77}) {
    for (int n : {7, 40, 140}) {
      auto psi = meas::apply_fad_mask(n, fad, 11);
      const double achieved = static_cast<double>(psi.size()) / (5.0 * n);
      CHECK(std::abs(achieved - fad) <= 1.0 / (5.0 * n));
    }
  }
}

TEST_CASE("every column keeps at least one observation") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto psi = meas::apply_fad_mask(10, 0.12, seed);  // 6 entries over 5 columns
    std::array<int, 5> count{};
    for (const auto& [i, c] : psi) count[c]++;
    for (int c = 0; c < 5; ++c) CHECK(count[c] >= 1);
  }
}

TEST_CASE("magnitude and power columns are sampled about twice as often") {
  // aggregate over many seeds: weights {1,1,2,2,2} at fad far from 1
  double phasor = 0, heavy = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto psi = meas::apply_fad_mask(50, 0.3, seed);
    for (const auto& [i, c] : psi) {
      if (c <= 1) phasor += 1;
      else heavy += 1;
    }
  }
  const double ratio = (heavy / 3.0) / (phasor / 2.0);
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.6);
}

TEST_CASE("invalid fad is rejected") {
  CHECK_THROWS_AS(meas::apply_fad_mask(10, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(meas::apply_fad_mask(10, 1.2, 1), std::invalid_argument);
}

TEST_CASE("zero noise leaves observations untouched") {
  Eigen::MatrixXd truth = Eigen::MatrixXd::Random(6, 5);
  auto psi = meas::apply_fad_mask(6, 0.5, 2);
  meas::NoiseSpec spec;
  spec.phasor = spec.magnitude = spec.power = 0.0;
  auto noisy = meas::add_noise(truth, psi, spec, 2);
  CHECK((noisy - truth).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("negative noise std is rejected") {
  Eigen::MatrixXd truth = Eigen::MatrixXd::Ones(2, 5);
  meas::NoiseSpec spec;
  spec.power = -0.01;
  CHECK_THROWS_AS(meas::add_noise(truth, {{0, 0}}, spec, 1), std::invalid_argument);
}

TEST_CASE("noise is reproducible and column-scaled") {
  Eigen::MatrixXd truth = Eigen::MatrixXd::Ones(40, 5);
  std::set<Index> psi;
  for (int i = 0; i < 40; ++i)
    for (int c = 0; c < 5; ++c) psi.insert({i, c});
  meas::NoiseSpec spec;
  auto a = meas::add_noise(truth, psi, spec, 123);
  auto b = meas::add_noise(truth, psi, spec, 123);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  // Monte Carlo: empirical std of the 1%-column within [0.9%, 1.1%]
  const int trials = 250;  // 250 * 40 = 10^4 draws
  double sum = 0, sum2 = 0;
  long count = 0;
  for (int t = 0; t < trials; ++t) {
    auto noisy = meas::add_noise(truth, psi, spec, 1000 + t);
    for (int i = 0; i < 40; ++i) {
      const double d = noisy(i, meas::kReS) - 1.0;
      sum += d;
      sum2 += d * d;
      ++count;
    }
  }
  const double var = sum2 / count - (sum / count) * (sum / count);
  const double sd = std::sqrt(var);
  CHECK(sd >= 0.009);
  CHECK(sd <= 0.011);
}

TEST_CASE("noise is unbiased") {
  Eigen::MatrixXd truth = Eigen::MatrixXd::Ones(100, 5);
  std::set<Index> psi;
  for (int i = 0; i < 100; ++i)
    for (int c = 0; c < 5; ++c) psi.insert({i, c});
  meas::NoiseSpec spec;
  // 10^5 draws on the power columns
  double sum = 0;
  long count = 0;
  for (int t = 0; t < 500; ++t) {
    auto noisy = meas::add_noise(truth, psi, spec, 5000 + t);
    for (int i = 0; i < 100; ++i) {
      sum += noisy(i, meas::kReS) - 1.0;
      sum += noisy(i, meas::kImS) - 1.0;
      count += 2;
    }
  }
  const double mean = sum / count;
  const double se = 0.01 / std::sqrt(static_cast<double>(count));
  CHECK(std::abs(mean) <= 3.0 * se);
}

TEST_CASE("scenario json round-trip") {
  auto c = net::load_case(data_dir() + "/case4.case");
  auto m = meas::make_scenario(c, 0.4, 9);
  auto text = m.to_json();
  auto m2 = meas::MeasurementMatrix::from_json(text);
  CHECK(m2.fad == m.fad);
  CHECK(m2.seed == m.seed);
  CHECK(m2.psi == m.psi);
  for (const auto& [i, cc] : m.psi) CHECK(m2.values(i, cc) == m.values(i, cc));
}
