#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pfmc/net/case.hpp"

namespace pfmc::net {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("case parse error at line " + std::to_string(line) + ": " + what);
}

std::vector<double> parse_row(const std::string& raw, int line) {
  std::string s = raw;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::replace(s.begin(), s.end(), ';', ' ');
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  if (!is.eof()) fail(line, "non-numeric token in data row");
  return out;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

NetworkCase parse_case(const std::string& text) {
  struct RawBus {
    int id;
    int type;
    Complex demand, shunt;
    double vm, va;
    int line;
  };
  std::vector<RawBus> raw_buses;
  std::vector<Branch> branches;
  double base_mva = 0.0;

  std::istringstream is(text);
  std::string linebuf;
  int lineno = 0;
  enum class Section { None, Bus, Branch } section = Section::None;

  while (std::getline(is, linebuf)) {
    ++lineno;
    std::string line = strip(linebuf);
    const auto comment = line.find_first_of("#%");
    if (comment != std::string::npos) line = strip(line.substr(0, comment));
    if (line.empty()) continue;

    std::string lower = line;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);

    if (lower.rfind("basemva", 0) == 0) {
      std::istringstream ls(line.substr(7));
      if (!(ls >> base_mva) || base_mva <= 0.0) fail(lineno, "invalid baseMVA value");
      section = Section::None;
      continue;
    }
    if (lower == "bus") {
      section = Section::Bus;
      continue;
    }
    if (lower == "branch") {
      section = Section::Branch;
      continue;
    }
    if (lower == "end") {
      section = Section::None;
      continue;
    }

    const std::vector<double> row = parse_row(line, lineno);
    switch (section) {
      case Section::None:
        fail(lineno, "data row outside of a section");
      case Section::Bus: {
        if (row.size() < 9) fail(lineno, "bus row needs at least 9 columns");
        RawBus b;
        b.id = static_cast<int>(row[0]);
        b.type = static_cast<int>(row[1]);
        b.demand = Complex(row[2], row[3]);
        b.shunt = Complex(row[4], row[5]);
        b.vm = row[7];
        b.va = row[8];
        b.line = lineno;
        if (b.type == 2) fail(lineno, "PV buses are not supported");
        if (b.type != 1 && b.type != 3) fail(lineno, "bus type must be 1 (PQ) or 3 (slack)");
        raw_buses.push_back(b);
        break;
      }
      case Section::Branch: {
        if (row.size() < 11) fail(lineno, "branch row needs at least 11 columns");
        Branch br;
        br.from = static_cast<int>(row[0]);
        br.to = static_cast<int>(row[1]);
        br.z = Complex(row[2], row[3]);
        br.charging = row[4];
        br.tap = row[8] == 0.0 ? 1.0 : row[8];
        if (row[9] != 0.0) fail(lineno, "phase-shifting transformers are not supported");
        br.in_service = row[10] != 0.0;
        branches.push_back(br);
        break;
      }
    }
  }

  if (base_mva <= 0.0) throw std::runtime_error("case parse error: missing baseMVA section");
  if (raw_buses.empty()) throw std::runtime_error("case parse error: missing bus section");

  NetworkCase c;
  c.base_mva = base_mva;
  c.branches = std::move(branches);

  // Slack first, remaining buses in file order.
  int slack_count = 0;
  for (const auto& rb : raw_buses) {
    if (rb.type == 3) ++slack_count;
  }
  if (slack_count != 1)
    throw std::runtime_error("case must contain exactly one slack bus, found " +
                             std::to_string(slack_count));

  auto push = [&](const RawBus& rb) {
    Bus b;
    b.id = rb.id;
    b.type = rb.type == 3 ? BusType::Slack : BusType::PQ;
    b.demand = rb.demand / base_mva;
    b.shunt = rb.shunt / base_mva;
    c.buses.push_back(b);
  };
  for (const auto& rb : raw_buses) {
    if (rb.type == 3) {
      push(rb);
      c.v0 = std::polar(rb.vm, rb.va * kPi / 180.0);
    }
  }
  for (const auto& rb : raw_buses) {
    if (rb.type != 3) push(rb);
  }

  validate_case(c);
  return c;
}

NetworkCase load_case(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open case file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  NetworkCase c = parse_case(ss.str());
  c.name = path;
  return c;
}

}  // namespace pfmc::net
