#include "pfreal/monodromy.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pfreal/errors.hpp"

namespace pfreal {

const char* to_string(Slice s) { return s == Slice::full ? "full" : "zero-injection"; }

Slice parse_slice(const std::string& name) {
  if (name == "zero-injection") return Slice::zero_injection;
  if (name == "full") return Slice::full;
  throw InvalidInput("unknown slice '" + name + "' (expected zero-injection or full)");
}

ParameterFamily::ParameterFamily(PowerSystem base, Slice slice)
    : base_(std::move(base)), slice_(slice), net_(coefficients(base_)) {
  for (const Line& l : base_.lines) {
    params_.emplace_back(l.b);
    slots_.push_back({-1, false});
    names_.push_back("b" + std::to_string(l.from) + std::to_string(l.to));
  }
  for (std::size_t i = 0; i < base_.size(); ++i) {
    const Bus& b = base_.buses[i];
    if (b.kind == BusKind::slack) continue;
    if (slice == Slice::zero_injection) {
      if (b.p != 0.0 || b.q != 0.0)
        throw InvalidInput("zero-injection slice needs zero injections at bus " + std::to_string(b.id));
      continue;
    }
    params_.emplace_back(b.p);
    slots_.push_back({static_cast<int>(i), false});
    names_.push_back("P" + std::to_string(b.id));
    if (b.kind == BusKind::pq) {
      params_.emplace_back(b.q);
      slots_.push_back({static_cast<int>(i), true});
      names_.push_back("Q" + std::to_string(b.id));
    }
  }
}

PolySystem ParameterFamily::system(std::span<const cplx> params) const {
  if (params.size() != params_.size()) throw InvalidInput("parameter vector has the wrong length");
  NetworkCoefficients net = net_;
  std::size_t line = 0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Slot& s = slots_[k];
    if (s.bus < 0)
      net.edges[line++].b = params[k];
    else if (s.reactive)
      net.q[static_cast<std::size_t>(s.bus)] = params[k];
    else
      net.p[static_cast<std::size_t>(s.bus)] = params[k];
  }
  return build_system(net);
}

std::vector<PathResult> track_parameter_path(const ParameterFamily& family, const std::vector<CVec>& starts,
                                             const std::vector<CVec>& waypoints, const HomotopyConfig& cfg) {
  if (waypoints.size() < 2) throw InvalidInput("a parameter path needs at least two waypoints");
  std::vector<PolySystem> systems;
  for (const auto& w : waypoints) systems.push_back(family.system(w));

  std::vector<PathResult> out;
  out.reserve(starts.size());
  for (const auto& x0 : starts) {
    PathResult r;
    r.status = PathStatus::finite;
    r.endpoint = x0;
    for (std::size_t s = 0; s + 1 < systems.size() && r.status == PathStatus::finite; ++s) {
      const Homotopy h(systems[s], systems[s + 1]);
      const int steps = r.steps;
      r = track_path(h, r.endpoint, cfg);
      r.steps += steps;
      if (r.status == PathStatus::finite) {
        auto [x, res] = sharpen(systems[s + 1], r.endpoint);
        r.endpoint = std::move(x);
        r.final_residual = res;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

ParamLoop random_triangle(const CVec& base, double scale, std::mt19937_64& rng) {
  double norm2 = 0.0;
  for (const auto& z : base) norm2 += std::norm(z);
  const double sd = scale * std::max(std::sqrt(norm2), 1.0);
  std::normal_distribution<double> normal(0.0, sd / std::sqrt(2.0));
  ParamLoop loop;
  loop.waypoints.push_back(base);
  for (int corner = 0; corner < 2; ++corner) {
    CVec w = base;
    for (auto& z : w) z += cplx(normal(rng), normal(rng));
    loop.waypoints.push_back(std::move(w));
  }
  loop.waypoints.push_back(base);
  return loop;
}

namespace {

double max_distance(const CVec& a, const CVec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

LoopOutcome track_loop(const ParameterFamily& family, const std::vector<CVec>& solutions, const ParamLoop& loop,
                       const HomotopyConfig& cfg, double match_tol) {
  LoopOutcome out;
  if (loop.waypoints.empty() || max_distance(loop.waypoints.front(), family.base()) > 0.0 ||
      max_distance(loop.waypoints.back(), family.base()) > 0.0)
    throw InvalidInput("loop must start and end at the base parameters");
  if (loop.waypoints.size() == 1) {
    out.permutation = Permutation(solutions.size());
    return out;
  }

  const auto paths = track_parameter_path(family, solutions, loop.waypoints, cfg);
  std::vector<int> images(solutions.size(), -1);
  std::vector<bool> taken(solutions.size(), false);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].status != PathStatus::finite) {
      out.reason = "path " + std::to_string(i + 1) + " " + to_string(paths[i].status);
      return out;
    }
    std::size_t best = solutions.size();
    double best_d = match_tol;
    for (std::size_t j = 0; j < solutions.size(); ++j) {
      const double d = max_distance(paths[i].endpoint, solutions[j]);
      if (d <= best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == solutions.size()) {
      out.reason = "path " + std::to_string(i + 1) + " returned to no known solution";
      return out;
    }
    if (taken[best]) {
      out.reason = "two paths returned to solution " + std::to_string(best + 1);
      return out;
    }
    taken[best] = true;
    images[i] = static_cast<int>(best);
  }
  out.permutation = Permutation(std::move(images));
  return out;
}

void MonodromyConfig::validate() const {
  if (budget < 1) throw InvalidInput("monodromy budget must be at least 1");
  if (!(loop_scale > 0.0)) throw InvalidInput("loop scale must be positive");
  if (!(match_tol > 0.0)) throw InvalidInput("match tolerance must be positive");
  if (max_loops < budget) throw InvalidInput("max_loops must be at least the budget");
  tracker.validate();
}

MonodromyGroup generate_group(const PowerSystem& ps, const MonodromyConfig& cfg) {
  cfg.validate();
  const ParameterFamily family(ps, cfg.slice);
  const PolySystem base_sys = family.system(family.base());
  const SolutionSet ss = solve_all(base_sys, cfg.tracker);
  if (ss.failed_count > 0) throw StructuralError("base solve has failed paths");
  for (std::size_t i = 0; i < ss.solutions.size(); ++i)
    if (ss.singular[i] || ss.multiplicity[i] != 1)
      throw StructuralError("base point has a singular solution; choose generic parameters");

  MonodromyGroup g;
  g.solutions = ss.solutions;
  const std::size_t m = g.solutions.size();
  StabilizerChain chain(m);
  std::mt19937_64 rng(cfg.seed);

  int quiet = 0;
  for (int attempt = 0; attempt < cfg.max_loops && quiet < cfg.budget; ++attempt) {
    const ParamLoop loop = random_triangle(family.base(), cfg.loop_scale, rng);
    const LoopOutcome o = track_loop(family, g.solutions, loop, cfg.tracker, cfg.match_tol);
    if (!o.permutation) {
      ++g.loops_rejected;
      const int total = g.loops_used + g.loops_rejected;
      if (total >= 20 && g.loops_rejected * 10 > total * 9)
        throw StructuralError("more than 90% of monodromy loops rejected; base point looks non-generic");
      continue;
    }
    ++g.loops_used;
    if (chain.insert(*o.permutation))
      quiet = 0;
    else
      ++quiet;
  }
  g.generators = chain.generators();
  g.order = chain.order();
  g.fixed_points = common_fixed_points(g.generators, m);
  g.blocks = finest_block_system(g.generators, m);
  return g;
}

std::string to_json(const MonodromyGroup& g) {
  nlohmann::ordered_json j;
  j["order"] = g.order.str();
  j["degree"] = g.solutions.size();
  auto fixed = nlohmann::ordered_json::array();
  for (int p : g.fixed_points) fixed.push_back(p + 1);
  j["fixed_points"] = fixed;
  auto blocks = nlohmann::ordered_json::array();
  for (const auto& b : g.blocks) {
    auto jb = nlohmann::ordered_json::array();
    for (int p : b) jb.push_back(p + 1);
    blocks.push_back(jb);
  }
  j["blocks"] = blocks;
  auto gens = nlohmann::ordered_json::array();
  for (const auto& p : g.generators) gens.push_back(p.to_cycle_string());
  j["generators"] = gens;
  j["loops_used"] = g.loops_used;
  j["loops_rejected"] = g.loops_rejected;
  return j.dump(2);
}

}  // namespace pfreal
