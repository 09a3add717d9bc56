#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pfreal/classify.hpp"
#include "pfreal/monodromy.hpp"

using namespace pfreal;

TEST_CASE("parameter family reproduces the base system") {
  const PowerSystem ps = fixtures::table1();
  const ParameterFamily zi(ps, Slice::zero_injection);
  CHECK(zi.size() == 6);
  CHECK(zi.names().front() == "b12");
  CHECK(zi.system(zi.base()) == build_system(ps));

  const ParameterFamily full(ps, Slice::full);
  CHECK(full.size() == 9);
  CHECK(full.names().back() == "P4");
  CVec params = full.base();
  params[8] = 0.25;
  PowerSystem shifted = ps;
  shifted.buses[3].p = 0.25;
  CHECK(full.system(params) == build_system(shifted));

  CHECK_THROWS_AS(ParameterFamily(fixtures::two_bus(1.0, 0.3), Slice::zero_injection), InvalidInput);
  CHECK(parse_slice("full") == Slice::full);
  CHECK_THROWS_AS(parse_slice("half"), InvalidInput);
}

TEST_CASE("loops act on the solution list") {
  const PowerSystem ps = fixtures::table1();
  const ParameterFamily fam(ps, Slice::zero_injection);
  const SolutionSet ss = solve_all(fam.system(fam.base()), HomotopyConfig::from_seed(1));
  const HomotopyConfig cfg;

  const LoopOutcome identity = track_loop(fam, ss.solutions, ParamLoop{{fam.base()}}, cfg);
  REQUIRE(identity.permutation);
  CHECK(identity.permutation->is_identity());

  // trivial solutions never move; (Vd, Vq)/(Vd, -Vq) pairs move together
  const auto split = split_trivial(ps, ss.solutions);
  std::vector<int> trivial_idx;
  for (std::size_t i = 0; i < ss.solutions.size(); ++i)
    if (is_trivial(ps, ss.solutions[i])) trivial_idx.push_back(static_cast<int>(i));
  REQUIRE(trivial_idx.size() == 8);

  std::vector<std::vector<int>> pairs;
  for (const auto& [a, b] : check_symmetry(split.nonconstant).pairs) {
    auto index_of = [&](const CVec& x) {
      return static_cast<int>(std::find(ss.solutions.begin(), ss.solutions.end(), x) - ss.solutions.begin());
    };
    std::vector<int> blk{index_of(split.nonconstant[a]), index_of(split.nonconstant[b])};
    std::sort(blk.begin(), blk.end());
    pairs.push_back(blk);
  }

  std::mt19937_64 rng(5);
  int accepted = 0;
  bool moved = false;
  for (int k = 0; k < 6; ++k) {
    const LoopOutcome o = track_loop(fam, ss.solutions, random_triangle(fam.base(), 0.5, rng), cfg);
    if (!o.permutation) continue;
    ++accepted;
    moved = moved || !o.permutation->is_identity();
    for (int t : trivial_idx) CHECK((*o.permutation)(t) == t);
    CHECK(preserves_partition(*o.permutation, pairs));
  }
  CHECK(accepted >= 4);
  CHECK(moved);

  ParamLoop open{{fam.base(), fam.base()}};
  open.waypoints.back()[0] += 1.0;
  CHECK_THROWS_AS(track_loop(fam, ss.solutions, open, cfg), InvalidInput);
}

TEST_CASE("a single loop generates a subgroup whose order divides 46080") {
  MonodromyConfig cfg;
  cfg.budget = 1;
  cfg.max_loops = 3;
  cfg.seed = 4;
  const MonodromyGroup g = generate_group(fixtures::table1(), cfg);
  CHECK(g.order >= 1);
  CHECK(46080 % g.order == 0);
}

TEST_CASE("zero-injection monodromy at the table I base") {
  MonodromyConfig cfg;
  cfg.seed = 11;
  const MonodromyGroup g = generate_group(fixtures::table1(), cfg);
  CHECK(g.order == 46080);
  CHECK(g.fixed_points.size() == 8);
  REQUIRE(g.blocks.size() == 6);
  for (const auto& b : g.blocks) CHECK(b.size() == 2);
  for (const auto& p : g.generators) CHECK(preserves_partition(p, g.blocks));
  const std::string json = to_json(g);
  CHECK(json.find("\"order\": \"46080\"") != std::string::npos);
}

TEST_CASE("b12 to zero sends four paths to infinity along isotropic directions") {
  const ParameterFamily fam(fixtures::table1(), Slice::zero_injection);
  const SolutionSet ss = solve_all(fam.system(fam.base()), HomotopyConfig::from_seed(1));
  std::vector<CVec> waypoints;
  for (cplx s : {cplx(1.0), cplx(0.75, 0.2), cplx(0.5, -0.2), cplx(0.25, 0.2), cplx(0.0)}) {
    CVec w = fam.base();
    w[0] *= s;
    waypoints.push_back(w);
  }
  const auto paths = track_parameter_path(fam, ss.solutions, waypoints, HomotopyConfig{});
  const PolySystem end = fam.system(waypoints.back());
  int diverged = 0;
  for (const auto& p : paths) {
    if (p.status == PathStatus::finite) {
      CHECK(p.final_residual < 1e-12);
      continue;
    }
    REQUIRE(p.status == PathStatus::diverged);
    ++diverged;
    const auto d = classify_divergence(end, p);
    CHECK(d.nonreal);
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(std::abs(d.direction[2 * k] * d.direction[2 * k] + d.direction[2 * k + 1] * d.direction[2 * k + 1]) < 1e-6);
  }
  CHECK(diverged == 4);
}
