#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pfmc/net/case.hpp"

namespace pfmc::meas {

/// Column order of the measurement matrix.
enum Column : int { kReV = 0, kImV = 1, kMagV = 2, kReS = 3, kImS = 4 };
constexpr int kColumns = 5;

/// Per-column relative noise standard deviations.
struct NoiseSpec {
  double phasor = 0.005;     // Re(v), Im(v)
  double magnitude = 0.001;  // |v|
  double power = 0.01;       // Re(s), Im(s)

  double for_column(int c) const;
};

using Index = std::pair<int, int>;  // (row, column)

/// Observed-entry measurement scenario over the non-slack buses.
struct MeasurementMatrix {
  Eigen::MatrixXd ground_truth;  // noise-free, n x 5 (evaluation only)
  Eigen::MatrixXd values;        // noisy on observed entries, truth elsewhere
  std::set<Index> psi;           // observed entries
  NoiseSpec noise;
  double fad = 1.0;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(ground_truth.rows()); }

  std::string to_json() const;
  static MeasurementMatrix from_json(const std::string& text);
};

/// Row i = [Re(v_i), Im(v_i), |v_i|, Re(s_i), Im(s_i)].
Eigen::MatrixXd build_measurement_matrix(const Eigen::VectorXcd& v, const Eigen::VectorXcd& s);

/// Seeded stratified mask at the requested fraction of available data;
/// magnitude/power columns carry twice the phasor weight and every column
/// keeps at least one observation.
std::set<Index> apply_fad_mask(int n, double fad, std::uint64_t seed);

/// Perturbs the observed entries with zero-mean Gaussian relative noise.
Eigen::MatrixXd add_noise(const Eigen::MatrixXd& truth, const std::set<Index>& psi,
                          const NoiseSpec& spec, std::uint64_t seed);

/// Full pipeline: AC ground truth -> matrix -> mask -> noise.
MeasurementMatrix make_scenario(const net::NetworkCase& c, double fad, std::uint64_t seed,
                                const NoiseSpec& spec = {});

}  // namespace pfmc::meas
