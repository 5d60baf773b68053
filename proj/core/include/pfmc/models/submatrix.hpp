#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfmc/meas/measurement.hpp"
#include "pfmc/models/builders.hpp"

namespace pfmc::models {

/// Principal-submatrix selection for the sparse PSD rewriting. Index sets
/// address the stacked block W (bus rows 0..n-1, then measurement columns
/// n..n+4).
struct SubmatrixPlan {
  int d = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> sets;  // each sorted, size d
  std::vector<std::string> warnings;   // coverage violations, if any

  int n_d() const { return static_cast<int>(sets.size()); }
};

/// One set per matrix entry: {bus i, column slot n+j} padded with buses
/// electrically adjacent to i, then seeded random buses; de-duplicated and
/// subsampled down to `n_d_cap` while preserving entry coverage when
/// possible (violations are reported in the plan, never silent).
SubmatrixPlan select_submatrices(const meas::MeasurementMatrix& m,
                                 const std::vector<std::vector<int>>& adjacency, int d,
                                 int n_d_cap, std::uint64_t seed);

/// Replaces the registered full PSD block with one d x d principal
/// submatrix constraint per plan entry. Returns the rewritten build.
ModelBuild apply_sparse_psd(ModelBuild build, const SubmatrixPlan& plan);

}  // namespace pfmc::models
