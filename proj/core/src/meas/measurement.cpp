#include "pfmc/meas/measurement.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pfmc/net/ac_solver.hpp"

namespace pfmc::meas {

double NoiseSpec::for_column(int c) const {
  switch (c) {
    case kReV:
    case kImV: return phasor;
    case kMagV: return magnitude;
    case kReS:
    case kImS: return power;
    default: throw std::out_of_range("column index");
  }
}

Eigen::MatrixXd build_measurement_matrix(const Eigen::VectorXcd& v, const Eigen::VectorXcd& s) {
  if (v.size() != s.size()) throw std::invalid_argument("voltage/injection length mismatch");
  const int n = static_cast<int>(v.size());
  Eigen::MatrixXd M(n, kColumns);
  for (int i = 0; i < n; ++i) {
    M(i, kReV) = v[i].real();
    M(i, kImV) = v[i].imag();
    M(i, kMagV) = std::abs(v[i]);
    M(i, kReS) = s[i].real();
    M(i, kImS) = s[i].imag();
  }
  return M;
}

std::set<Index> apply_fad_mask(int n, double fad, std::uint64_t seed) {
  if (!(fad > 0.0 && fad <= 1.0)) throw std::invalid_argument("fad must lie in (0, 1]");
  const long total = static_cast<long>(n) * kColumns;
  const long target = std::lround(fad * static_cast<double>(total));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(std::numeric_limits<double>::min(), 1.0);

  // Weighted sampling without replacement (exponential-key method):
  // magnitude/power columns get weight 2, phasor columns weight 1.
  struct Key {
    double key;
    int row, col;
  };
  std::vector<Key> keys;
  keys.reserve(total);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < kColumns; ++c) {
      const double w = (c == kReV || c == kImV) ? 1.0 : 2.0;
      keys.push_back({std::pow(uni(rng), 1.0 / w), i, c});
    }
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.key != b.key) return a.key > b.key;
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });

  std::set<Index> psi;
  for (long k = 0; k < target && k < total; ++k) psi.insert({keys[k].row, keys[k].col});

  // Stratification fix-up: every column keeps at least one observation.
  for (int c = 0; c < kColumns; ++c) {
    const bool present =
        std::any_of(psi.begin(), psi.end(), [&](const Index& e) { return e.second == c; });
    if (present) continue;
    // Swap in the best unused entry of column c for the most-covered column's
    // weakest member (deterministic: first candidates in key order).
    for (const auto& cand : keys) {
      if (cand.col != c || psi.count({cand.row, cand.col})) continue;
      // remove the lowest-keyed selected entry from a column with >1 entries
      for (auto it = keys.rbegin(); it != keys.rend(); ++it) {
        const Index victim{it->row, it->col};
        if (!psi.count(victim)) continue;
        long col_count = std::count_if(psi.begin(), psi.end(),
                                       [&](const Index& e) { return e.second == it->col; });
        if (col_count > 1) {
          psi.erase(victim);
          psi.insert({cand.row, cand.col});
          break;
        }
      }
      break;
    }
  }
  return psi;
}

Eigen::MatrixXd add_noise(const Eigen::MatrixXd& truth, const std::set<Index>& psi,
                          const NoiseSpec& spec, std::uint64_t seed) {
  if (spec.phasor < 0.0 || spec.magnitude < 0.0 || spec.power < 0.0)
    throw std::invalid_argument("noise standard deviations must be nonnegative");
  Eigen::MatrixXd noisy = truth;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Iteration over the ordered set keeps the draw sequence deterministic.
  for (const auto& [i, c] : psi) {
    const double sigma = spec.for_column(c);
    if (sigma == 0.0) continue;
    noisy(i, c) = truth(i, c) * (1.0 + sigma * gauss(rng));
  }
  return noisy;
}

MeasurementMatrix make_scenario(const net::NetworkCase& c, double fad, std::uint64_t seed,
                                const NoiseSpec& spec) {
  const net::AcSolution sol = net::solve_ac_power_flow(c);
  const auto inj = c.load_injections();
  Eigen::VectorXcd s(sol.v.size());
  for (int i = 0; i < s.size(); ++i) s[i] = inj[i];

  MeasurementMatrix m;
  m.ground_truth = build_measurement_matrix(sol.v, s);
  m.psi = apply_fad_mask(m.ground_truth.rows(), fad, seed);
  m.values = add_noise(m.ground_truth, m.psi, spec, seed);
  m.noise = spec;
  m.fad = fad;
  m.seed = seed;
  return m;
}

std::string MeasurementMatrix::to_json() const {
  nlohmann::json j;
  j["fad"] = fad;
  j["seed"] = seed;
  j["noise_spec"] = {{"phasor", noise.phasor}, {"magnitude", noise.magnitude}, {"power", noise.power}};
  nlohmann::json idx = nlohmann::json::array();
  nlohmann::json obs = nlohmann::json::array();
  for (const auto& [i, c] : psi) {
    idx.push_back({i, c});
    obs.push_back(values(i, c));
  }
  j["psi"] = idx;
  j["observed"] = obs;
  j["n"] = n();
  return j.dump(2);
}

MeasurementMatrix MeasurementMatrix::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MeasurementMatrix m;
  m.fad = j.at("fad").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.noise.phasor = j.at("noise_spec").at("phasor").get<double>();
  m.noise.magnitude = j.at("noise_spec").at("magnitude").get<double>();
  m.noise.power = j.at("noise_spec").at("power").get<double>();
  const int n = j.at("n").get<int>();
  m.ground_truth = Eigen::MatrixXd::Zero(n, kColumns);
  m.values = Eigen::MatrixXd::Zero(n, kColumns);
  const auto& idx = j.at("psi");
  const auto& obs = j.at("observed");
  for (size_t k = 0; k < idx.size(); ++k) {
    const int i = idx[k].at(0).get<int>();
    const int c = idx[k].at(1).get<int>();
    m.psi.insert({i, c});
    m.values(i, c) = obs[k].get<double>();
  }
  return m;
}

}  // namespace pfmc::meas
