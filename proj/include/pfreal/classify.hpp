#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pfreal/power_system.hpp"
#include "pfreal/tracker.hpp"

namespace pfreal {

inline constexpr double kDefaultRealTol = 1e-8;

struct RealSplit {
  std::vector<CVec> real;     // imaginary parts zeroed
  std::vector<CVec> nonreal;  // includes ambiguous ones
  // Solutions whose largest imaginary part lies in [real_tol / 10, 10 * real_tol].
  // They are counted as nonreal; the value is kept for the warning.
  std::vector<double> ambiguous_imag;
  bool nonreal_even = true;
};

/// Real if every imaginary part is below real_tol / 10, ambiguous (counted
/// nonreal) up to 10 * real_tol, nonreal beyond. Imaginary parts are measured
/// relative to max(1, |x|_inf).
RealSplit split_real(const SolutionSet& ss, double real_tol = kDefaultRealTol);
RealSplit split_real(const std::vector<CVec>& solutions, double real_tol = kDefaultRealTol);

// V_q = 0 and V_d = +-vm at every non-slack bus, within tol.
bool is_trivial(const PowerSystem& ps, std::span<const cplx> x, double tol = 1e-9);

struct TrivialSplit {
  std::vector<CVec> trivial;
  std::vector<CVec> nonconstant;
};

TrivialSplit split_trivial(const PowerSystem& ps, const std::vector<CVec>& solutions);

/// Matching (Vd, Vq) <-> (Vd, -Vq) on a list of solutions. pairs[k] holds the
/// indices of the two partners. Throws StructuralError when a solution has no
/// partner or would have to pair with itself. Distances are relative to
/// max(1, |x|_inf).
struct SymmetryPairing {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double max_mismatch = 0.0;
};

SymmetryPairing check_symmetry(const std::vector<CVec>& solutions, double tol = 1e-8);

// Pairs x with its coordinatewise conjugate; true when every solution has a
// partner within tol (relative to max(1, |x|_inf), as in check_symmetry).
bool conjugate_closed(const std::vector<CVec>& solutions, double tol = 1e-8);

struct SolutionRecord {
  std::vector<double> vd;  // per non-slack bus
  std::vector<double> vq;
  bool is_real = true;
  bool is_trivial = false;
  double residual = 0.0;
  std::vector<double> q_out;  // per bus, every bus
  double slack_p = 0.0;
};

SolutionRecord make_record(const PowerSystem& ps, std::span<const cplx> x, double real_tol = kDefaultRealTol);

struct VerifyReport {
  bool ok = false;
  double max_residual = 0.0;
  std::vector<double> p;  // recomputed active injections, every bus
  std::vector<double> q;
  double slack_p = 0.0;
  double power_balance = 0.0;    // sum of p over all buses
  double max_line_flow = 0.0;    // largest |active flow| over lines
  std::string message;
};

/// Recompute all injections from the record's voltages. Fails on residual above
/// 1e-7 or, for lossless networks, |sum p| above 1e-9.
VerifyReport verify(const SolutionRecord& record, const PowerSystem& ps);

}  // namespace pfreal
