#include "pfreal/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

namespace pfreal {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double inf_norm(const VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool all_finite(const VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

VectorXcd to_eigen(std::span<const cplx> v) {
  VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

CVec to_vec(const VectorXcd& v) { return CVec(v.data(), v.data() + v.size()); }

constexpr double kGeometricRatio = 0.5;
constexpr double kEndgameFloor = 1e-14;
constexpr int kCauchySamples = 16;
constexpr int kMaxCycle = 8;

// Predictor-corrector stepper for one path. Owns its scratch space; one
// instance per thread.
class Tracker {
 public:
  Tracker(const Homotopy& h, const HomotopyConfig& cfg)
      : h_(h), cfg_(cfg), n_(static_cast<Eigen::Index>(h.nvars())) {
    hv_.resize(n_);
    ht_.resize(n_);
    hx_.resize(n_, n_);
    lu_ = Eigen::PartialPivLU<MatrixXcd>(n_);
  }

  PathResult run(std::span<const cplx> start);

 private:
  struct Cauchy {
    bool closed = false;
    bool diverged = false;
    int cycle = 0;
    double max_deviation = 0.0;
    VectorXcd estimate;
  };

  bool velocity(const VectorXcd& x, cplx t, VectorXcd& dx) {
    h_.eval(x, t, hv_, hx_, ht_);
    lu_.compute(hx_);
    dx = lu_.solve(-ht_);
    return all_finite(dx);
  }

  // Classical fourth-order Runge-Kutta on dx/dt = -Hx^{-1} Ht.
  bool predict(const VectorXcd& x, cplx t, cplx dt, VectorXcd& out) {
    if (!velocity(x, t, k1_)) return false;
    tmp_ = x + (0.5 * dt) * k1_;
    if (!velocity(tmp_, t + 0.5 * dt, k2_)) return false;
    tmp_ = x + (0.5 * dt) * k2_;
    if (!velocity(tmp_, t + 0.5 * dt, k3_)) return false;
    tmp_ = x + dt * k3_;
    if (!velocity(tmp_, t + dt, k4_)) return false;
    out = x + (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    return all_finite(out);
  }

  struct NewtonOutcome {
    bool converged = false;
    double first = 0.0;
  };

  NewtonOutcome correct(VectorXcd& x, cplx t, int max_iters) {
    NewtonOutcome out;
    double prev = 0.0;
    for (int k = 0; k < max_iters; ++k) {
      h_.eval(x, t, hv_, hx_, ht_);
      lu_.compute(hx_);
      dx_ = lu_.solve(hv_);
      if (!all_finite(dx_)) return out;
      x -= dx_;
      const double d = inf_norm(dx_);
      if (k == 0) out.first = d;
      // Near a singular point (including points at infinity) the attainable
      // accuracy is about cond * eps; do not ask Newton for more than that.
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * lu_condition_estimate();
      if (d <= std::max(cfg_.corrector_tol, floor) * (1.0 + inf_norm(x))) {
        out.converged = true;
        return out;
      }
      if (k > 0 && d > 0.5 * prev) return out;
      prev = d;
    }
    return out;
  }

  // max|u_ii| / min|u_ii| of the current factorization, a cheap lower bound
  // on the condition number.
  double lu_condition_estimate() const {
    const auto d = lu_.matrixLU().diagonal().cwiseAbs();
    const double lo = d.minCoeff();
    return lo > 0.0 ? d.maxCoeff() / lo : std::numeric_limits<double>::infinity();
  }

  bool step(VectorXcd& x, cplx t0, cplx t1) {
    if (!predict(x, t0, t1 - t0, pred_)) return false;
    if (!correct(pred_, t1, cfg_.corrector_max_iters).converged) return false;
    x = pred_;
    ++steps_;
    return true;
  }

  // Move from t0 to t1 (any complex values) with halving on failure.
  bool advance(VectorXcd& x, cplx t0, cplx t1) {
    const double span = std::abs(t1 - t0);
    double frac = 1.0;
    double done = 0.0;
    int successes = 0;
    while (done < 1.0) {
      const double next = std::min(1.0, done + frac);
      const cplx a = t0 + done * (t1 - t0);
      const cplx b = t0 + next * (t1 - t0);
      work_ = x;
      if (step(work_, a, b)) {
        x = work_;
        done = next;
        if (++successes >= 2) {
          frac = std::min(1.0, frac * 2.0);
          successes = 0;
        }
        if (inf_norm(x) > cfg_.divergence_radius) return true;
      } else {
        frac *= 0.5;
        successes = 0;
        if (frac * span < cfg_.step_min * std::max(std::abs(t1), span)) return false;
      }
    }
    return true;
  }

  // Predict to t = 0 and Newton there. Accepted only when the first correction
  // is small, which guards against landing on a neighbouring path.
  bool try_land(const VectorXcd& x, double t, VectorXcd& out) {
    if (!predict(x, t, -t, out)) return false;
    const double scale = 1.0 + inf_norm(out);
    const NewtonOutcome nw = correct(out, 0.0, cfg_.corrector_max_iters + 1);
    return nw.converged && nw.first <= 1e-4 * scale;
  }

  // Largest distance from the estimate over the loop's sample points.
  double deviation(const VectorXcd& x0, const VectorXcd& est, double radius, int loops) {
    VectorXcd x = x0;
    double dev = inf_norm(x - est);
    const double dtheta = 2.0 * std::numbers::pi / kCauchySamples;
    for (int j = 0; j < loops * kCauchySamples; j += 4) {
      if (!advance(x, std::polar(radius, j * dtheta), std::polar(radius, (j + 4) * dtheta))) break;
      dev = std::max(dev, inf_norm(x - est));
    }
    return dev;
  }

  Cauchy cauchy_loop(VectorXcd x, double radius) {
    Cauchy c;
    const VectorXcd x0 = x;
    VectorXcd sum = VectorXcd::Zero(n_);
    const double dtheta = 2.0 * std::numbers::pi / kCauchySamples;
    for (int loop = 1; loop <= kMaxCycle; ++loop) {
      for (int j = 0; j < kCauchySamples; ++j) {
        sum += x;
        const double th0 = ((loop - 1) * kCauchySamples + j) * dtheta;
        const cplx a = std::polar(radius, th0);
        const cplx b = std::polar(radius, th0 + dtheta);
        if (!advance(x, a, b)) return c;
        if (inf_norm(x) > cfg_.divergence_radius) {
          c.diverged = true;
          return c;
        }
      }
      if (inf_norm(x - x0) <= 1e-6 * (1.0 + inf_norm(x0))) {
        c.closed = true;
        c.cycle = loop;
        c.estimate = sum / static_cast<double>(loop * kCauchySamples);
        c.max_deviation = deviation(x0, c.estimate, radius, loop);
        return c;
      }
    }
    return c;
  }

  // The circle mean of a Laurent series is its constant term, so a closed
  // loop around a diverging path also yields an estimate; only accept it when
  // it is an approximate root of the target and the samples stay near it.
  bool estimate_is_root(const Cauchy& c) {
    const double scale = 1.0 + inf_norm(c.estimate);
    if (c.max_deviation > 0.5 * scale) return false;
    h_.eval_value(c.estimate, 0.0, hv_);
    return inf_norm(hv_) <= 1e-6 * scale;
  }

  const Homotopy& h_;
  const HomotopyConfig& cfg_;
  Eigen::Index n_;
  int steps_ = 0;
  VectorXcd hv_, ht_, k1_, k2_, k3_, k4_, tmp_, dx_, pred_, work_;
  MatrixXcd hx_;
  Eigen::PartialPivLU<MatrixXcd> lu_;
};

PathResult Tracker::run(std::span<const cplx> start) {
  PathResult res;
  VectorXcd x = to_eigen(start);
  const double te = cfg_.endgame_start_t;
  double t = 1.0;
  double h = cfg_.step_init;
  int successes = 0;

  auto finish = [&](PathStatus s) {
    res.status = s;
    res.last_point = to_vec(x);
    res.last_t = t;
    res.steps = steps_;
    return res;
  };

  while (t > te) {
    const double t1 = std::max(t - h, te);
    work_ = x;
    if (step(work_, t, t1)) {
      x = work_;
      t = t1;
      if (++successes >= 5) {
        h = std::min(h * 1.5, cfg_.step_max);
        successes = 0;
      }
      if (inf_norm(x) > cfg_.divergence_radius) return finish(PathStatus::diverged);
    } else {
      h *= 0.5;
      successes = 0;
      if (h < cfg_.step_min) return finish(PathStatus::failed);
    }
  }

  int land_failures = 0;
  std::optional<VectorXcd> previous_estimate;
  VectorXcd landed;
  double previous_norm = inf_norm(x);
  bool growing = false;
  while (true) {
    if (inf_norm(x) > cfg_.divergence_radius) return finish(PathStatus::diverged);
    if (growing) {
      // Norm rising geometrically as t halves: head straight for the radius.
    } else if (try_land(x, t, landed)) {
      finish(PathStatus::finite);
      res.endpoint = to_vec(landed);
      res.last_point = res.endpoint;
      res.last_t = 0.0;
      return res;
    }
    if (!growing) ++land_failures;
    if (!growing && land_failures >= 3) {
      Cauchy c = cauchy_loop(x, t);
      if (c.diverged) return finish(PathStatus::diverged);
      if (c.closed && estimate_is_root(c)) {
        if (previous_estimate &&
            inf_norm(c.estimate - *previous_estimate) <= 1e-8 * (1.0 + inf_norm(c.estimate))) {
          finish(PathStatus::finite);
          res.endpoint = to_vec(c.estimate);
          res.cycle_number = c.cycle;
          res.last_t = 0.0;
          return res;
        }
        previous_estimate = c.estimate;
      }
    }
    const double tn = t * kGeometricRatio;
    if (!advance(x, t, tn)) return finish(PathStatus::failed);
    t = tn;
    const double norm = inf_norm(x);
    growing = norm > 10.0 && norm > 1.2 * previous_norm;
    previous_norm = norm;
    if (t < kEndgameFloor) return finish(PathStatus::failed);
  }
}

std::int64_t rounded(double v) { return std::llround(v * 1e8); }

}  // namespace

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::finite:
      return "finite";
    case PathStatus::diverged:
      return "diverged";
    case PathStatus::failed:
      return "failed";
  }
  return "?";
}

cplx gamma_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  // 53-bit uniform in [0, 1) built directly from the engine output.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::polar(1.0, 2.0 * std::numbers::pi * u);
}

HomotopyConfig HomotopyConfig::from_seed(std::uint64_t seed) {
  HomotopyConfig cfg;
  cfg.seed = seed;
  cfg.gamma = gamma_from_seed(seed);
  return cfg;
}

void HomotopyConfig::validate() const {
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12) throw InvalidInput("gamma must have unit modulus");
  if (!(0.0 < step_min && step_min <= step_init && step_init <= step_max && step_max < 1.0))
    throw InvalidInput("step sizes must satisfy 0 < step_min <= step_init <= step_max < 1");
  if (!(divergence_radius > 1.0)) throw InvalidInput("divergence_radius must exceed 1");
  if (!(endgame_start_t > 0.0 && endgame_start_t < 1.0))
    throw InvalidInput("endgame_start_t must lie in (0, 1)");
  if (corrector_max_iters < 1 || !(corrector_tol > 0.0)) throw InvalidInput("bad corrector settings");
  if (workers < 1) throw InvalidInput("workers must be positive");
}

Homotopy::Homotopy(PolySystem start, PolySystem target)
    : nvars_(target.nvars()),
      start_(std::move(start)),
      target_(std::move(target)),
      start_c_(start_),
      target_c_(target_) {
  if (start_.nvars() != target_.nvars()) throw InvalidInput("start and target differ in variable count");
}

Homotopy Homotopy::total_degree(const PolySystem& start, const PolySystem& target, cplx gamma) {
  std::vector<Poly> scaled;
  for (const auto& p : start.polys()) scaled.push_back(gamma * p);
  return Homotopy(PolySystem(std::move(scaled)), target);
}

void Homotopy::eval(const Eigen::VectorXcd& x, cplx t, Eigen::VectorXcd& h, Eigen::MatrixXcd& hx,
                    Eigen::VectorXcd& ht) const {
  thread_local Eigen::VectorXcd fs, ft;
  thread_local Eigen::MatrixXcd js, jt;
  start_c_.eval_jacobian(x, fs, js);
  target_c_.eval_jacobian(x, ft, jt);
  const cplx s = 1.0 - t;
  h = t * fs + s * ft;
  hx = t * js + s * jt;
  ht = fs - ft;
}

void Homotopy::eval_value(const Eigen::VectorXcd& x, cplx t, Eigen::VectorXcd& h) const {
  thread_local Eigen::VectorXcd fs, ft;
  start_c_.eval(x, fs);
  target_c_.eval(x, ft);
  h = t * fs + (1.0 - t) * ft;
}

StartSystem start_system(const PolySystem& target) {
  const std::size_t n = target.nvars();
  const auto deg = target.degrees();
  for (std::size_t i = 0; i < n; ++i)
    if (deg[i] < 1)
      throw InvalidInput("polynomial " + std::to_string(i) + " has degree " + std::to_string(deg[i]) +
                         "; total-degree start system needs degree >= 1");
  StartSystem s;
  std::vector<Poly> g;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = deg[i];
    g.emplace_back(n, std::vector<Term>{Term{1.0, e}, Term{-1.0, std::vector<int>(n, 0)}});
  }
  s.system = PolySystem(std::move(g));

  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    CVec p(n);
    for (std::size_t i = 0; i < n; ++i)
      p[i] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(idx[i]) / deg[i]);
    s.points.push_back(std::move(p));
    bool wrapped = true;
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < static_cast<std::size_t>(deg[k])) {
        wrapped = false;
        break;
      }
      idx[k] = 0;
    }
    if (wrapped) return s;
  }
}

PathResult track_path(const Homotopy& h, std::span<const cplx> start, const HomotopyConfig& cfg) {
  if (start.size() != h.nvars()) throw InvalidInput("start point dimension mismatch");
  Tracker tr(h, cfg);
  PathResult r = tr.run(start);
  if (r.status == PathStatus::finite) {
    r.final_residual = residual_norm(h.target(), r.endpoint);
    r.condition = jacobian_condition(h.target(), r.endpoint);
    r.singular = r.condition > cfg.singular_condition;
  }
  return r;
}

std::pair<CVec, double> sharpen(const PolySystem& sys, std::span<const cplx> x0, int max_iters,
                                double target_residual) {
  const CompiledSystem cs(sys);
  VectorXcd x = to_eigen(x0);
  VectorXcd f, dx;
  MatrixXcd j;
  cs.eval(x, f);
  VectorXcd best = x;
  double best_res = inf_norm(f);
  for (int k = 0; k < max_iters && best_res > target_residual; ++k) {
    cs.eval_jacobian(x, f, j);
    dx = j.partialPivLu().solve(f);
    if (!all_finite(dx)) break;
    x -= dx;
    cs.eval(x, f);
    const double r = inf_norm(f);
    if (r < best_res) {
      best_res = r;
      best = x;
    } else if (r > 10.0 * best_res) {
      break;
    }
  }
  return {to_vec(best), best_res};
}

double jacobian_condition(const PolySystem& sys, std::span<const cplx> x) {
  const CompiledSystem cs(sys);
  VectorXcd f;
  MatrixXcd j;
  cs.eval_jacobian(to_eigen(x), f, j);
  Eigen::JacobiSVD<MatrixXcd> svd(j);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smin = sv[sv.size() - 1];
  return smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
}

bool canonical_less(const CVec& a, const CVec& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const auto ra = rounded(a[i].real()), rb = rounded(b[i].real());
    if (ra != rb) return ra < rb;
  }
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    const auto ia = rounded(a[i].imag()), ib = rounded(b[i].imag());
    if (ia != ib) return ia < ib;
  }
  return a.size() < b.size();
}

namespace {

std::vector<PathResult> track_all(const Homotopy& h, const std::vector<CVec>& starts,
                                  const HomotopyConfig& cfg) {
  std::vector<PathResult> results(starts.size());
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.workers));
  if (workers == 1 || starts.size() < 2) {
    for (std::size_t i = 0; i < starts.size(); ++i) results[i] = track_path(h, starts[i], cfg);
    return results;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < starts.size(); i += workers) results[i] = track_path(h, starts[i], cfg);
    });
  return results;
}

SolutionSet collect(const PolySystem& sys, const std::vector<PathResult>& paths, const HomotopyConfig& cfg) {
  SolutionSet ss;
  ss.total_paths = static_cast<int>(paths.size());
  struct Candidate {
    CVec x;
    double residual;
    double condition;
  };
  std::vector<Candidate> finite;
  for (const auto& p : paths) {
    switch (p.status) {
      case PathStatus::finite: {
        ++ss.finite_paths;
        auto [x, r] = sharpen(sys, p.endpoint);
        finite.push_back({std::move(x), r, p.condition});
        break;
      }
      case PathStatus::diverged:
        ++ss.diverged_count;
        ss.diverged.push_back(p);
        break;
      case PathStatus::failed:
        ++ss.failed_count;
        break;
    }
  }
  std::sort(finite.begin(), finite.end(),
            [](const Candidate& a, const Candidate& b) { return canonical_less(a.x, b.x); });

  std::vector<bool> taken(finite.size(), false);
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (taken[i]) continue;
    int mult = 1;
    std::size_t best = i;
    for (std::size_t j = i + 1; j < finite.size(); ++j) {
      if (taken[j]) continue;
      double d = 0.0, scale = 1.0;
      for (std::size_t k = 0; k < finite[i].x.size(); ++k) {
        d = std::max(d, std::abs(finite[i].x[k] - finite[j].x[k]));
        scale = std::max(scale, std::abs(finite[i].x[k]));
      }
      if (d <= cfg.dedup_tol * scale) {
        taken[j] = true;
        ++mult;
        if (finite[j].residual < finite[best].residual) best = j;
      }
    }
    ss.solutions.push_back(finite[best].x);
    ss.residuals.push_back(finite[best].residual);
    ss.multiplicity.push_back(mult);
    const bool ill = finite[best].condition > cfg.singular_condition;
    ss.singular.push_back(mult > 1 || ill);
    // Two paths on one regular root: one of them jumped.
    if (mult > 1 && !ill) ss.path_jumps += mult - 1;
  }
  return ss;
}

}  // namespace

SolutionSet solve_all(const PolySystem& sys, const HomotopyConfig& cfg) {
  cfg.validate();
  const StartSystem start = start_system(sys);
  HomotopyConfig run_cfg = cfg;
  SolutionSet ss;
  for (int attempt = 1; attempt <= 3; ++attempt) {
    if (attempt >= 2) {
      run_cfg.step_init = cfg.step_init / 4;
      run_cfg.step_max = cfg.step_max / 4;
    }
    if (attempt == 3) run_cfg.gamma = gamma_from_seed(cfg.seed + 1);
    const Homotopy h = Homotopy::total_degree(start.system, sys, run_cfg.gamma);
    ss = collect(sys, track_all(h, start.points, run_cfg), run_cfg);
    ss.attempts = attempt;
    if (ss.failed_count == 0 && ss.path_jumps == 0) break;
  }
  return ss;
}

DivergenceDiagnosis classify_divergence(const PolySystem& sys, const PathResult& path) {
  DivergenceDiagnosis d;
  if (path.status != PathStatus::diverged || path.last_point.empty()) return d;
  double norm2 = 0.0;
  for (const auto& z : path.last_point) norm2 += std::norm(z);
  const double norm = std::sqrt(norm2);
  if (norm == 0.0) return d;
  d.valid = true;
  for (const auto& z : path.last_point) d.direction.push_back(z / norm);
  const PolySystem top = top_form(sys);
  for (const auto& p : top.polys()) {
    const double r = std::abs(p(std::span<const cplx>(d.direction)));
    d.top_form_residuals.push_back(r);
    d.max_top_residual = std::max(d.max_top_residual, r);
  }
  cplx dtd = 0.0;
  for (const auto& z : d.direction) dtd += z * z;
  d.real_distance = std::sqrt(std::max(0.0, (1.0 - std::abs(dtd)) / 2.0));
  // A real direction r has |r^T r| = 1 (distance 0); a direction on the
  // isotropic cone sum Vd^2 + Vq^2 = 0 sits at the maximum 1/sqrt(2).
  d.nonreal = d.real_distance > 1e-3;
  return d;
}

}  // namespace pfreal
