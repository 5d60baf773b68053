#pragma once

#include <complex>
#include <string>
#include <vector>

namespace pfmc::net {

using Complex = std::complex<double>;

enum class BusType { Slack, PQ };

struct Bus {
  int id = 0;  // external id from the case file
  BusType type = BusType::PQ;
  Complex shunt;   // shunt admittance, per-unit
  Complex demand;  // load demand (consumption positive), per-unit
};

struct Branch {
  int from = 0;  // external bus ids
  int to = 0;
  Complex z;        // series impedance, per-unit
  double charging = 0.0;  // total line charging susceptance, per-unit
  double tap = 1.0;       // off-nominal tap ratio (1 = none)
  bool in_service = true;
};

/// Validated feeder description. Internally buses are stored with the slack
/// first, followed by the non-slack buses; all matrices in this library use
/// that ordering, with non-slack ("load") buses indexed 0..n-1.
struct NetworkCase {
  std::string name;
  double base_mva = 1.0;
  Complex v0{1.0, 0.0};  // slack voltage phasor, per-unit
  std::vector<Bus> buses;     // slack at position 0
  std::vector<Branch> branches;

  int total_buses() const { return static_cast<int>(buses.size()); }
  int n_load() const { return total_buses() - 1; }

  /// Complex injection vector for the non-slack buses (demand negated).
  std::vector<Complex> load_injections() const;

  /// Adjacency over non-slack bus indices (in-service branches only; links
  /// through the slack are dropped).
  std::vector<std::vector<int>> load_adjacency() const;

  /// Internal index (0 = slack) for an external bus id.
  int index_of(int external_id) const;
};

/// Parses the whitespace/comma-delimited case format (sections `baseMVA`,
/// `bus`, `branch` with MATPOWER column order; extra columns ignored).
/// Throws std::runtime_error with a line number on malformed input and on
/// validation failures (slack count, connectivity, zero impedances).
NetworkCase parse_case(const std::string& text);

/// Reads a case file from disk.
NetworkCase load_case(const std::string& path);

/// Serializes a case in the format accepted by parse_case.
std::string write_case(const NetworkCase& c);

/// Validates invariants shared by parse_case and generated cases.
void validate_case(const NetworkCase& c);

}  // namespace pfmc::net
