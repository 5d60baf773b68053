#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pfmc/bench/runner.hpp"
#include "pfmc/net/feeder_gen.hpp"

namespace pfmc::bench {

std::string to_string(Method m) {
  switch (m) {
    case Method::M1: return "m1";
    case Method::M2: return "m2";
    case Method::S1: return "s1";
    case Method::S2: return "s2";
    case Method::FullPsd: return "full";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "m1") return Method::M1;
  if (s == "m2") return Method::M2;
  if (s == "s1") return Method::S1;
  if (s == "s2") return Method::S2;
  if (s == "full" || s == "pfpc") return Method::FullPsd;
  throw std::invalid_argument("unknown method '" + s + "' (expected m1|m2|s1|s2|full)");
}

CaseBundle resolve_case(const std::string& case_ref) {
  CaseBundle b;
  if (case_ref.rfind("synthetic:", 0) == 0) {
    std::string rest = case_ref.substr(10);
    const auto colon = rest.find(':');
    const int buses = std::stoi(rest.substr(0, colon));
    const std::uint64_t seed = colon == std::string::npos ? 1 : std::stoull(rest.substr(colon + 1));
    b.feeder = net::make_radial_feeder(buses, seed);
    b.name = b.feeder.name;
  } else {
    b.feeder = net::load_case(case_ref);
    // strip directories for reporting
    const auto slash = case_ref.find_last_of('/');
    b.name = slash == std::string::npos ? case_ref : case_ref.substr(slash + 1);
  }
  b.part = net::build_admittance(b.feeder);
  b.lpf = net::build_linear_model(b.part, b.feeder.v0);
  return b;
}

RunConfig RunConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunConfig c;
  c.case_ref = j.at("case").get<std::string>();
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(method_from_string(m));
  }
  if (j.contains("fad")) c.fad = j.at("fad").get<double>();
  if (j.contains("seeds")) {
    c.seeds.clear();
    for (const auto& s : j.at("seeds")) c.seeds.push_back(s.get<std::uint64_t>());
  } else if (j.contains("n_seeds")) {
    c.seeds.clear();
    for (int s = 1; s <= j.at("n_seeds").get<int>(); ++s) c.seeds.push_back(s);
  }
  if (j.contains("k")) c.k = j.at("k").get<int>();
  if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
  if (j.contains("d")) {
    c.d_grid.clear();
    if (j.at("d").is_array())
      for (const auto& v : j.at("d")) c.d_grid.push_back(v.get<int>());
    else c.d_grid.push_back(j.at("d").get<int>());
  }
  if (j.contains("nd")) {
    if (j.at("nd").is_array()) {
      c.nd_grid.clear();
      for (const auto& v : j.at("nd")) c.nd_grid.push_back(v.get<int>());
    } else {
      c.nd_grid = {j.at("nd").get<int>()};
    }
  }
  if (j.contains("delta") && !j.at("delta").is_null()) c.delta = j.at("delta").get<double>();
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    if (n.contains("phasor")) c.noise.phasor = n.at("phasor").get<double>();
    if (n.contains("magnitude")) c.noise.magnitude = n.at("magnitude").get<double>();
    if (n.contains("power")) c.noise.power = n.at("power").get<double>();
  }
  if (j.contains("loss")) {
    const std::string l = j.at("loss").get<std::string>();
    if (l == "l1") c.loss = models::Loss::L1;
    else if (l == "l2" || l == "squared-l2") c.loss = models::Loss::SquaredL2;
    else throw std::invalid_argument("loss must be 'l1' or 'squared-l2'");
  }
  if (j.contains("use_slack_power")) c.use_slack_power = j.at("use_slack_power").get<bool>();
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (s.contains("feas_tol")) c.solver.feas_tol = s.at("feas_tol").get<double>();
    if (s.contains("gap_tol")) c.solver.gap_tol = s.at("gap_tol").get<double>();
    if (s.contains("time_limit")) c.solver.time_limit_sec = s.at("time_limit").get<double>();
    if (s.contains("max_iters")) c.solver.max_iters = s.at("max_iters").get<long>();
  }
  if (j.contains("bnb")) {
    const auto& s = j.at("bnb");
    if (s.contains("max_nodes")) c.bnb.max_nodes = s.at("max_nodes").get<long>();
    if (s.contains("time_limit")) c.bnb.time_limit_sec = s.at("time_limit").get<double>();
    if (s.contains("gap")) c.bnb.gap_tol = s.at("gap").get<double>();
    if (s.contains("eps_proj")) c.bnb.eps_proj = s.at("eps_proj").get<double>();
    if (s.contains("node_full_psd")) c.bnb.node_full_psd = s.at("node_full_psd").get<bool>();
  }
  if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

}  // namespace pfmc::bench
