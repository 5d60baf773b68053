#pragma once

#include <cstdint>

#include "pfmc/net/case.hpp"

namespace pfmc::net {

/// Deterministically generates a radial medium-voltage feeder: one slack,
/// a trunk-biased random tree, section impedances and bus loads drawn from
/// typical distribution ranges, loads rescaled so the deepest bus sits near
/// `target_vmin` at nominal loading.
NetworkCase make_radial_feeder(int n_buses, std::uint64_t seed, double target_vmin = 0.95);

}  // namespace pfmc::net
