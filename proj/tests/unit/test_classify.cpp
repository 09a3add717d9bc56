#include <doctest.h>

#include "fixtures.hpp"
#include "pfreal/classify.hpp"

using namespace pfreal;

namespace {

const SolutionSet& table1_solutions() {
  static const SolutionSet ss = solve_all(build_system(fixtures::table1()), HomotopyConfig::from_seed(1));
  return ss;
}

}  // namespace

TEST_CASE("real split thresholds") {
  const std::vector<CVec> xs{{cplx(1.0, 1e-10)}, {cplx(1.0, 5e-8)}, {cplx(1.0, 1e-6)}, {cplx(2.0, 0.0)}};
  const RealSplit rs = split_real(xs);
  CHECK(rs.real.size() == 2);
  CHECK(rs.real[0][0].imag() == 0.0);
  CHECK(rs.nonreal.size() == 2);
  CHECK(rs.ambiguous_imag.size() == 1);
  CHECK(rs.nonreal_even);
}

TEST_CASE("table I classification") {
  const PowerSystem ps = fixtures::table1();
  const RealSplit rs = split_real(table1_solutions());
  CHECK(rs.real.size() == 16);
  CHECK(rs.nonreal.size() == 4);
  CHECK(rs.ambiguous_imag.empty());
  const TrivialSplit ts = split_trivial(ps, rs.real);
  CHECK(ts.trivial.size() == 8);
  CHECK(ts.nonconstant.size() == 8);
  CHECK(conjugate_closed(table1_solutions().solutions));

  // every Table II row has a solution within the printed precision
  for (const auto& row : fixtures::kTable2Nonconstant) {
    double best = 1.0;
    for (const auto& x : ts.nonconstant) {
      double d = 0.0;
      for (std::size_t k = 0; k < 6; ++k) d = std::max(d, std::abs(x[k].real() - row[k]));
      best = std::min(best, d);
    }
    CHECK(best < 1e-4);
  }
}

TEST_CASE("symmetry pairing") {
  const PowerSystem ps = fixtures::table1();
  const auto split = split_trivial(ps, table1_solutions().solutions);
  const SymmetryPairing sp = check_symmetry(split.nonconstant);
  CHECK(sp.pairs.size() == 6);
  CHECK(sp.max_mismatch < 1e-10);

  CHECK_THROWS_AS(check_symmetry(split.trivial), StructuralError);
  auto unmatched = split.nonconstant;
  unmatched.pop_back();
  CHECK_THROWS_AS(check_symmetry(unmatched), StructuralError);
}

TEST_CASE("conjugate closure detects a missing partner") {
  auto xs = table1_solutions().solutions;
  const auto it = std::find_if(xs.begin(), xs.end(), [](const CVec& x) {
    return std::any_of(x.begin(), x.end(), [](cplx z) { return std::abs(z.imag()) > 1e-3; });
  });
  REQUIRE(it != xs.end());
  xs.erase(it);
  CHECK_FALSE(conjugate_closed(xs));
}

TEST_CASE("records verify against recomputed injections") {
  const PowerSystem ps = fixtures::table1();
  for (const auto& x : split_real(table1_solutions()).real) {
    const SolutionRecord rec = make_record(ps, x);
    CHECK(rec.is_real);
    const VerifyReport rep = verify(rec, ps);
    CHECK(rep.ok);
    CHECK(rep.max_residual < 1e-10);
    CHECK(std::abs(rep.power_balance) < 1e-9);
    CHECK(std::abs(rep.slack_p) < 1e-9);
    CHECK(rec.q_out.size() == 4);
  }
  SolutionRecord bad = make_record(ps, split_real(table1_solutions()).real.back());
  bad.vd[0] += 1e-4;
  CHECK_FALSE(verify(bad, ps).ok);
  bad.is_real = false;
  CHECK_FALSE(verify(bad, ps).ok);
}

TEST_CASE("trivial test respects the voltage magnitude") {
  PowerSystem ps = fixtures::two_bus(1.0, 0.0);
  ps.buses[1].vm = 1.1;
  CHECK(is_trivial(ps, CVec{1.1, 0.0}));
  CHECK(is_trivial(ps, CVec{-1.1, 0.0}));
  CHECK_FALSE(is_trivial(ps, CVec{1.0, 0.0}));
  CHECK_FALSE(is_trivial(ps, CVec{1.1, 0.01}));
  CHECK_THROWS_AS(is_trivial(ps, CVec{1.0}), InvalidInput);
}
