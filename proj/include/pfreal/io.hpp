#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfreal/classify.hpp"
#include "pfreal/eliminant.hpp"
#include "pfreal/power_system.hpp"
#include "pfreal/tracker.hpp"

namespace pfreal {

// Malformed or schema-violating system file.
class JsonError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// {"buses":[{"id":1,"type":"slack","vm":1.0},{"id":2,"type":"pv","vm":1.0,"p":0.0},...],
///  "lines":[{"from":1,"to":2,"b":1.612,"g":0.0},...]}
/// Unknown keys are rejected; buses may appear in any order but ids must be 1..n.
PowerSystem parse_system_json(const std::string& text);
PowerSystem load_system(const std::string& path);
std::string system_to_json(const PowerSystem& ps);

/// Solve output in display order: real trivial, real nonconstant, nonreal,
/// canonical order inside each group.
struct SolveReport {
  std::vector<CVec> solutions;
  std::vector<SolutionRecord> records;
  int n_complex = 0;
  int n_real = 0;
  int n_trivial = 0;
  int diverged = 0;
  int failed = 0;
  std::vector<double> ambiguous_imag;
};

SolveReport solve_report(const PowerSystem& ps, std::uint64_t seed);

// sol_id,vd2,vq2,...,is_real,is_trivial,residual; real parts, 10 decimals.
std::string solutions_csv(const PowerSystem& ps, const SolveReport& r);
std::string solutions_json(const PowerSystem& ps, const SolveReport& r);

std::string eliminant_json(const PowerSystem& ps, const EliminantCount& ec);

// Fixed-point text with no "-0.000..." output.
std::string format_fixed(double v, int decimals);

}  // namespace pfreal
