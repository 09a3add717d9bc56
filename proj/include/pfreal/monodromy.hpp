#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pfreal/perm_group.hpp"
#include "pfreal/power_system.hpp"
#include "pfreal/tracker.hpp"

namespace pfreal {

enum class Slice {
  zero_injection,  // line susceptances only; base injections must be zero
  full,            // susceptances plus every specified injection (P at PV, P and Q at PQ)
};

const char* to_string(Slice s);
Slice parse_slice(const std::string& name);  // "zero-injection" | "full"

/// The power flow system as a function of complex parameters. Equations are
/// affine in every parameter, so a straight segment in parameter space is the
/// same thing as a linear homotopy between the two endpoint systems.
class ParameterFamily {
 public:
  ParameterFamily(PowerSystem base, Slice slice);

  Slice slice() const { return slice_; }
  const PowerSystem& base_system() const { return base_; }
  const CVec& base() const { return params_; }
  std::size_t size() const { return params_.size(); }
  // "b12", "b13", ..., then "P2", "Q3", ...
  const std::vector<std::string>& names() const { return names_; }

  PolySystem system(std::span<const cplx> params) const;

 private:
  struct Slot {
    int bus;  // bus index for injections, -1 for a line
    bool reactive;
  };
  PowerSystem base_;
  Slice slice_;
  NetworkCoefficients net_;
  CVec params_;
  std::vector<Slot> slots_;
  std::vector<std::string> names_;
};

/// Track each start point through the polygonal parameter path. A path that
/// diverges or fails on some segment stops there and is reported as such.
/// Intermediate endpoints are sharpened before the next segment.
std::vector<PathResult> track_parameter_path(const ParameterFamily& family, const std::vector<CVec>& starts,
                                             const std::vector<CVec>& waypoints, const HomotopyConfig& cfg);

struct ParamLoop {
  std::vector<CVec> waypoints;  // first and last equal the base
};

// base -> base + d1 -> base + d2 -> base, d complex Gaussian of scale scale * |base|.
ParamLoop random_triangle(const CVec& base, double scale, std::mt19937_64& rng);

struct LoopOutcome {
  std::optional<Permutation> permutation;  // empty when the loop was rejected
  std::string reason;
};

/// Permutation induced on the ordered solution list by transport around the
/// loop; image(i) = j when solution i returns as solution j. Rejected when an
/// endpoint is not within match_tol of a solution, two endpoints land on one
/// solution, or a path leaves the finite region.
LoopOutcome track_loop(const ParameterFamily& family, const std::vector<CVec>& solutions, const ParamLoop& loop,
                       const HomotopyConfig& cfg, double match_tol = 1e-6);

struct MonodromyConfig {
  Slice slice = Slice::zero_injection;
  int budget = 25;  // stop after this many consecutive non-growing loops
  std::uint64_t seed = 0;
  double loop_scale = 0.5;
  double match_tol = 1e-6;
  int max_loops = 5000;
  HomotopyConfig tracker;
  void validate() const;
};

struct MonodromyGroup {
  std::vector<CVec> solutions;  // ordered base solutions the permutations act on
  std::vector<Permutation> generators;  // only loops that enlarged the group
  BigInt order = 1;
  std::vector<int> fixed_points;  // 0-based
  std::vector<std::vector<int>> blocks;
  int loops_used = 0;
  int loops_rejected = 0;
};

/// Random-loop monodromy at the given base system. Throws StructuralError
/// when the base solve is incomplete or singular, and when more than 90% of
/// the sampled loops are rejected (base point looks non-generic).
MonodromyGroup generate_group(const PowerSystem& ps, const MonodromyConfig& cfg);

// {"order": "...", "fixed_points": [...], "blocks": [[i,j],...], ...} with 1-based indices.
std::string to_json(const MonodromyGroup& g);

}  // namespace pfreal
