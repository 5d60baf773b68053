#include "pfmc/models/submatrix.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace pfmc::models {

SubmatrixPlan select_submatrices(const meas::MeasurementMatrix& m,
                                 const std::vector<std::vector<int>>& adjacency, int d,
                                 int n_d_cap, std::uint64_t seed) {
  const int n = m.n();
  const int w_dim = n + meas::kColumns;
  if (d < 2) throw std::invalid_argument("submatrix size d must be at least 2");
  if (d > w_dim) throw std::invalid_argument("submatrix size d exceeds the stacked block");
  if (n_d_cap < 1) throw std::invalid_argument("n_d cap must be positive");

  std::mt19937_64 rng(seed);

  // One anchored set per matrix entry: {bus i, column slot n+j} grown with
  // buses electrically adjacent to i, then random buses, then (when the bus
  // pool is exhausted on tiny feeders) remaining column slots.
  std::set<std::vector<int>> unique_sets;
  std::vector<std::vector<int>> anchored;  // per-entry set, pre-dedup order
  anchored.reserve(static_cast<size_t>(n) * meas::kColumns);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < meas::kColumns; ++j) {
      std::set<int> chosen{i, n + j};
      if (i < static_cast<int>(adjacency.size())) {
        for (int nb : adjacency[i]) {
          if (static_cast<int>(chosen.size()) >= d) break;
          chosen.insert(nb);
        }
      }
      std::uniform_int_distribution<int> pick_bus(0, n - 1);
      int guard = 0;
      while (static_cast<int>(chosen.size()) < d && guard < 50 * d) {
        chosen.insert(pick_bus(rng));
        ++guard;
      }
      for (int extra = n; static_cast<int>(chosen.size()) < d && extra < w_dim; ++extra) {
        chosen.insert(extra);  // tiny feeder: fall back to column slots
      }
      std::vector<int> set(chosen.begin(), chosen.end());
      anchored.push_back(set);
      unique_sets.insert(std::move(set));
    }
  }

  SubmatrixPlan plan;
  plan.d = d;
  plan.seed = seed;
  plan.sets.assign(unique_sets.begin(), unique_sets.end());

  if (plan.n_d() > n_d_cap) {
    std::shuffle(plan.sets.begin(), plan.sets.end(), rng);
    plan.sets.resize(n_d_cap);
    std::sort(plan.sets.begin(), plan.sets.end());

    // Coverage audit: every entry (i, j) needs some kept set containing
    // both i and n+j.
    std::set<std::vector<int>> kept(plan.sets.begin(), plan.sets.end());
    auto covers = [&](int i, int j) {
      for (const auto& s : kept) {
        if (std::binary_search(s.begin(), s.end(), i) &&
            std::binary_search(s.begin(), s.end(), n + j))
          return true;
      }
      return false;
    };
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < meas::kColumns; ++j) {
        if (!covers(i, j)) {
          plan.warnings.push_back("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") lost PSD coverage under the n_d cap");
        }
      }
    }
  }
  return plan;
}

ModelBuild apply_sparse_psd(ModelBuild build, const SubmatrixPlan& plan) {
  if (!build.has_big_block || !build.prog.has_constraint(build.big_block))
    throw std::invalid_argument("model has no registered full PSD block to rewrite");
  const int w_dim = build.n + meas::kColumns;
  build.prog.remove(build.big_block);
  build.has_big_block = false;

  for (const auto& set : plan.sets) {
    const int d = static_cast<int>(set.size());
    conic::MatExpr sub(d, d);
    for (int a = 0; a < d; ++a) {
      if (set[a] < 0 || set[a] >= w_dim) throw std::invalid_argument("plan index out of range");
      for (int c = 0; c < d; ++c) sub.at(a, c) = w_entry(build, set[a], set[c]);
    }
    build.prog.add_psd(sub);
  }
  return build;
}

}  // namespace pfmc::models
