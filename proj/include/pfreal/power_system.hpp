#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfreal/poly.hpp"

namespace pfreal {

enum class BusKind { slack, pv, pq };

std::string to_string(BusKind k);

struct Bus {
  int id = 0;
  BusKind kind = BusKind::pv;
  double vm = 1.0;  // slack and PV
  double p = 0.0;   // PV and PQ
  double q = 0.0;   // PQ only
};

// Stored as an unordered pair; b follows the convention P_i = sum |Vi||Vk| b_ik sin(th_i - th_k).
struct Line {
  int from = 0;
  int to = 0;
  double b = 0.0;
  double g = 0.0;
};

struct PowerSystem {
  std::vector<Bus> buses;
  std::vector<Line> lines;

  std::size_t size() const { return buses.size(); }
  bool lossless() const;
};

// Throws InvalidInput on a malformed network: ids not 1..n, no or several slack
// buses, duplicate or self lines, nonpositive magnitudes, negative conductance.
void validate(const PowerSystem& ps);

const Bus& slack_bus(const PowerSystem& ps);

// Ids of the non-slack buses in increasing order. Bus non_slack_ids()[k] owns
// variables 2k (V_d) and 2k+1 (V_q).
std::vector<int> non_slack_ids(const PowerSystem& ps);

/// Injection and line data with complex values, the form the homotopy and
/// monodromy code need when parameters leave the real line.
struct NetworkCoefficients {
  struct Edge {
    int from;  // bus index, 0-based
    int to;
    cplx b;
    cplx g;
  };
  std::vector<BusKind> kinds;
  std::vector<double> vm;
  std::vector<cplx> p;
  std::vector<cplx> q;
  std::vector<Edge> edges;
};

NetworkCoefficients coefficients(const PowerSystem& ps);

/// Rectangular-coordinate power flow polynomials with the slack bus substituted
/// (V_d = |V|, V_q = 0). Variables are (V_d, V_q) per non-slack bus in id
/// order. Per PV bus: active-power balance then magnitude equation. Per PQ bus:
/// active then reactive balance. Every polynomial is written as
/// (computed injection) - (specified value).
PolySystem build_system(const PowerSystem& ps);
PolySystem build_system(const NetworkCoefficients& net);

/// Equivalent unit-magnitude system: b_ik <- |Vi||Vk| b_ik, vm <- 1.
/// Only lossless slack/PV networks are supported.
PowerSystem normalize_vm(const PowerSystem& ps);

// C(2n-2, n-1), the bound on complex solutions of an n-bus network.
std::uint64_t complex_bound(int n);
std::uint64_t complex_bound(const PowerSystem& ps);
// 2^(2n-2), the Bezout number of the quadratic formulation.
std::uint64_t bezout_bound(int n);
std::uint64_t bezout_bound(const PowerSystem& ps);

/// Full-network voltages of a solution point: slack bus filled in from its
/// magnitude, entries indexed by bus position (id - 1).
struct BusVoltages {
  std::vector<cplx> vd;
  std::vector<cplx> vq;
};
BusVoltages expand_voltages(const PowerSystem& ps, std::span<const cplx> point);

/// Injections computed from rectangular voltages, every bus included.
struct Injections {
  std::vector<cplx> p;
  std::vector<cplx> q;
};
Injections injections(const PowerSystem& ps, const BusVoltages& v);

// Active power flowing from bus index i into line (i, k), both 0-based.
cplx line_flow(const Line& line, int i, int k, const BusVoltages& v);

/// Active injections in polar form, sum_k |Vi||Vk| (G_ik cos + B_ik sin)(th_i - th_k),
/// with angles indexed by bus position. The slack angle is whatever the caller passes.
std::vector<double> polar_active_injections(const PowerSystem& ps, std::span<const double> angles);

}  // namespace pfreal
