#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pfreal/poly.hpp"

namespace pfreal {

struct HomotopyConfig {
  cplx gamma{0.6, 0.8};
  double step_init = 0.02;
  double step_min = 1e-12;
  double step_max = 0.1;
  double corrector_tol = 1e-10;
  int corrector_max_iters = 3;
  double divergence_radius = 1e8;
  double endgame_start_t = 0.1;
  std::uint64_t seed = 0;

  double dedup_tol = 1e-6;  // relative to max(1, |x|_inf)
  // Jacobian condition above which an endpoint is flagged singular.
  double singular_condition = 1e12;
  // Worker threads for solve_all (paths are independent).
  int workers = 1;

  // Defaults with gamma drawn from the seed.
  static HomotopyConfig from_seed(std::uint64_t seed);
  void validate() const;
};

// Unit-modulus constant derived deterministically from a seed.
cplx gamma_from_seed(std::uint64_t seed);

enum class PathStatus { finite, diverged, failed };

const char* to_string(PathStatus s);

struct PathResult {
  PathStatus status = PathStatus::failed;
  CVec endpoint;    // finite only
  CVec last_point;  // last accepted iterate, every status
  double last_t = 1.0;
  int steps = 0;
  double final_residual = 0.0;
  double condition = 0.0;  // Jacobian condition at the endpoint (finite only)
  bool singular = false;
  int cycle_number = 1;  // > 1 when the Cauchy endgame closed after several loops
};

/// H(x, t) = t * start(x) + (1 - t) * target(x), tracked from t = 1 to t = 0.
/// start already carries any gamma factor. Both systems must share the
/// variable count.
class Homotopy {
 public:
  Homotopy(PolySystem start, PolySystem target);

  // gamma * t * g + (1 - t) * f with g the total-degree start system of f.
  static Homotopy total_degree(const PolySystem& start, const PolySystem& target, cplx gamma);

  std::size_t nvars() const { return nvars_; }
  const PolySystem& start() const { return start_; }
  const PolySystem& target() const { return target_; }

  // Value, x-Jacobian and t-derivative at complex t.
  void eval(const Eigen::VectorXcd& x, cplx t, Eigen::VectorXcd& h, Eigen::MatrixXcd& hx,
            Eigen::VectorXcd& ht) const;
  void eval_value(const Eigen::VectorXcd& x, cplx t, Eigen::VectorXcd& h) const;

 private:
  std::size_t nvars_;
  PolySystem start_;
  PolySystem target_;
  CompiledSystem start_c_;
  CompiledSystem target_c_;
};

struct StartSystem {
  PolySystem system;          // g_i = x_i^{d_i} - 1
  std::vector<CVec> points;   // all prod d_i roots-of-unity tuples
};

StartSystem start_system(const PolySystem& target);

PathResult track_path(const Homotopy& h, std::span<const cplx> start, const HomotopyConfig& cfg);

struct SolutionSet {
  std::vector<CVec> solutions;     // deduplicated, sharpened, canonically sorted
  std::vector<int> multiplicity;   // paths that landed on each solution
  std::vector<bool> singular;      // Jacobian condition above cfg.singular_condition
  std::vector<double> residuals;
  int total_paths = 0;
  int finite_paths = 0;  // before deduplication
  int diverged_count = 0;
  int failed_count = 0;
  int path_jumps = 0;  // extra paths that ended on a regular root already reached
  int attempts = 1;
  std::vector<PathResult> diverged;
};

/// Track every total-degree path, sharpen and deduplicate the finite endpoints.
/// If a path fails or jumps onto another path's regular root, the solve is
/// repeated with a quarter of the step size, then once more with a gamma
/// derived from seed + 1. What remains shows in failed_count and path_jumps.
SolutionSet solve_all(const PolySystem& sys, const HomotopyConfig& cfg);

/// Newton on sys from x; returns the sharpened point and its residual.
std::pair<CVec, double> sharpen(const PolySystem& sys, std::span<const cplx> x, int max_iters = 10,
                                double target_residual = 1e-13);

double jacobian_condition(const PolySystem& sys, std::span<const cplx> x);

/// Diagnosis of a path that left the divergence radius: where on the
/// hyperplane at infinity it is heading.
struct DivergenceDiagnosis {
  bool valid = false;  // false for non-diverged input
  CVec direction;      // last iterate scaled to unit 2-norm
  std::vector<double> top_form_residuals;  // |top_form(f_i)(direction)| per equation
  double max_top_residual = 0.0;
  // min over phases phi of |Im(e^{i phi} direction)|; 0 iff a real
  // representative of the direction exists. Equals sqrt((1 - |d^T d|) / 2).
  double real_distance = 0.0;
  bool nonreal = false;
};

DivergenceDiagnosis classify_divergence(const PolySystem& sys, const PathResult& path);

// Lexicographic order on real parts, then imaginary parts, both rounded to 1e-8.
bool canonical_less(const CVec& a, const CVec& b);

}  // namespace pfreal
