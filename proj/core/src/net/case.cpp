#include "pfmc/net/case.hpp"

#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pfmc::net {

std::vector<Complex> NetworkCase::load_injections() const {
  std::vector<Complex> s;
  s.reserve(n_load());
  for (size_t i = 1; i < buses.size(); ++i) s.push_back(-buses[i].demand);
  return s;
}

int NetworkCase::index_of(int external_id) const {
  for (size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == external_id) return static_cast<int>(i);
  }
  throw std::runtime_error("unknown bus id " + std::to_string(external_id));
}

std::vector<std::vector<int>> NetworkCase::load_adjacency() const {
  std::map<int, int> pos;
  for (size_t i = 0; i < buses.size(); ++i) pos[buses[i].id] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(n_load());
  for (const auto& br : branches) {
    if (!br.in_service) continue;
    const int a = pos.at(br.from);
    const int b = pos.at(br.to);
    if (a == 0 || b == 0) continue;  // slack links carry no Y-block pairing
    adj[a - 1].push_back(b - 1);
    adj[b - 1].push_back(a - 1);
  }
  return adj;
}

void validate_case(const NetworkCase& c) {
  int slack_count = 0;
  std::map<int, int> pos;
  for (size_t i = 0; i < c.buses.size(); ++i) {
    const Bus& b = c.buses[i];
    if (pos.count(b.id)) throw std::runtime_error("duplicate bus id " + std::to_string(b.id));
    pos[b.id] = static_cast<int>(i);
    if (b.type == BusType::Slack) ++slack_count;
  }
  if (slack_count != 1)
    throw std::runtime_error("case must contain exactly one slack bus, found " +
                             std::to_string(slack_count));
  if (c.buses.empty() || c.buses[0].type != BusType::Slack)
    throw std::runtime_error("internal ordering violated: slack must be stored first");
  if (c.base_mva <= 0.0) throw std::runtime_error("baseMVA must be positive");

  for (const auto& br : c.branches) {
    if (!pos.count(br.from) || !pos.count(br.to))
      throw std::runtime_error("branch references unknown bus " +
                               std::to_string(pos.count(br.from) ? br.to : br.from));
    if (std::abs(br.z) == 0.0)
      throw std::runtime_error("branch " + std::to_string(br.from) + "-" + std::to_string(br.to) +
                               " has zero impedance");
  }

  // Connectivity over in-service branches.
  const int nb = c.total_buses();
  std::vector<std::vector<int>> adj(nb);
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    adj[pos.at(br.from)].push_back(pos.at(br.to));
    adj[pos.at(br.to)].push_back(pos.at(br.from));
  }
  std::vector<bool> seen(nb, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : adj[u]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        q.push(w);
      }
    }
  }
  if (reached != nb)
    throw std::runtime_error("feeder graph is disconnected: reached " + std::to_string(reached) +
                             " of " + std::to_string(nb) + " buses");
}

std::string write_case(const NetworkCase& c) {
  std::ostringstream os;
  os.precision(12);
  if (!c.name.empty()) os << "# " << c.name << "\n";
  os << "baseMVA " << c.base_mva << "\n\n";
  os << "bus\n";
  os << "# id type Pd Qd Gs Bs area Vm Va baseKV zone Vmax Vmin\n";
  for (const auto& b : c.buses) {
    const bool slack = b.type == BusType::Slack;
    const double vm = slack ? std::abs(c.v0) : 1.0;
    const double va = slack ? std::arg(c.v0) * 180.0 / 3.14159265358979323846 : 0.0;
    os << b.id << " " << (slack ? 3 : 1) << " " << b.demand.real() * c.base_mva << " "
       << b.demand.imag() * c.base_mva << " " << b.shunt.real() * c.base_mva << " "
       << b.shunt.imag() * c.base_mva << " 1 " << vm << " " << va << " 12.5 1 1.1 0.9\n";
  }
  os << "end\n\nbranch\n";
  os << "# from to r x b rateA rateB rateC tap shift status\n";
  for (const auto& br : c.branches) {
    os << br.from << " " << br.to << " " << br.z.real() << " " << br.z.imag() << " " << br.charging
       << " 0 0 0 " << (br.tap == 1.0 ? 0.0 : br.tap) << " 0 " << (br.in_service ? 1 : 0) << "\n";
  }
  os << "end\n";
  return os.str();
}

}  // namespace pfmc::net
