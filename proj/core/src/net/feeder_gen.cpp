#include "pfmc/net/feeder_gen.hpp"

#include <random>
#include <stdexcept>

#include "pfmc/net/ac_solver.hpp"

namespace pfmc::net {

NetworkCase make_radial_feeder(int n_buses, std::uint64_t seed, double target_vmin) {
  if (n_buses < 2) throw std::invalid_argument("feeder needs at least two buses");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  NetworkCase c;
  c.name = "radial-" + std::to_string(n_buses) + "-seed" + std::to_string(seed);
  c.base_mva = 10.0;
  c.v0 = Complex(1.0, 0.0);

  Bus slack;
  slack.id = 1;
  slack.type = BusType::Slack;
  c.buses.push_back(slack);

  // Trunk-biased random tree: mostly chains with occasional laterals, the
  // usual look of a medium-voltage feeder.
  std::vector<int> trunk{1};
  for (int id = 2; id <= n_buses; ++id) {
    Bus b;
    b.id = id;
    b.type = BusType::PQ;
    const double p_mw = 0.02 + 0.13 * uni(rng);       // 20..150 kW
    const double q_ratio = 0.25 + 0.35 * uni(rng);
    b.demand = Complex(p_mw, p_mw * q_ratio) / c.base_mva;
    c.buses.push_back(b);

    int parent;
    const bool extend_trunk = uni(rng) < 0.55 || trunk.size() < 3;
    if (extend_trunk) {
      parent = trunk.back();
      trunk.push_back(id);
    } else {
      std::uniform_int_distribution<size_t> pick(1, c.buses.size() - 2);
      parent = c.buses[pick(rng)].id;
    }

    Branch br;
    br.from = parent;
    br.to = id;
    const bool on_trunk = extend_trunk;
    const double r = on_trunk ? (0.0008 + 0.0022 * uni(rng)) : (0.002 + 0.005 * uni(rng));
    const double xr = 0.7 + 0.5 * uni(rng);
    br.z = Complex(r, r * xr);
    if (uni(rng) < 0.2) br.charging = 1e-4 + 2e-4 * uni(rng);
    c.branches.push_back(br);
  }

  // Rescale loads so the deepest bus lands near target_vmin: bisection on a
  // global load multiplier against the exact AC solution.
  const AdmittancePartition part = build_admittance(c);
  auto vmin_at = [&](double scale) -> double {
    try {
      return solve_ac_power_flow(c, part, scale).v.cwiseAbs().minCoeff();
    } catch (const std::runtime_error&) {
      return 0.0;  // diverged: far beyond capability
    }
  };

  double lo = 0.0, hi = 1.0;
  if (vmin_at(1.0) > target_vmin) {
    while (vmin_at(hi) > target_vmin && hi < 64.0) hi *= 2.0;
    lo = hi / 2.0;
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (vmin_at(mid) > target_vmin) lo = mid;
    else hi = mid;
  }
  const double scale = lo > 0.0 ? lo : 0.5 * (lo + hi);
  for (size_t i = 1; i < c.buses.size(); ++i) c.buses[i].demand *= scale;

  validate_case(c);
  return c;
}

}  // namespace pfmc::net
