#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pfreal/eliminant.hpp"

using namespace pfreal;

TEST_CASE("descartes counts sign changes") {
  CHECK(descartes(UniPoly::from_double({-1.0, 0.0, 1.0})) == 1);
  CHECK(descartes(UniPoly::from_double({6.0, -5.0, 1.0})) == 2);
  CHECK(descartes(UniPoly::from_double({1.0, 1.0, 1.0})) == 0);
}

TEST_CASE("sturm counts distinct real roots in intervals") {
  const UniPoly p = UniPoly::from_roots({1.0, 2.0, -3.0});
  CHECK(sturm_positive(p) == 2);
  CHECK(sturm_negative(p) == 1);
  CHECK(sturm_count(p, 0.0, 1.5) == 1);
  CHECK(sturm_count(p, -INFINITY, INFINITY) == 3);
  CHECK(sturm_positive(UniPoly::from_double({1.0, 0.0, 1.0})) == 0);
  // zero root is neither positive nor negative
  CHECK(sturm_positive(UniPoly::from_roots({0.0, 0.5})) == 1);
}

TEST_CASE("repeated roots are counted once and flagged") {
  for (int k = 2; k <= 5; ++k) {
    const UniPoly p = UniPoly::from_roots(std::vector<double>(static_cast<std::size_t>(k), 1.0));
    // (x - 1)^k has binomial coefficients with alternating signs
    CHECK(descartes(p) == k);
    CHECK(sturm_positive(p) == 1);
    const RootCount rc = count_roots(p);
    CHECK_FALSE(rc.squarefree);
    CHECK(rc.numeric_gcd_degree == k - 1);
  }
  CHECK(count_roots(UniPoly::from_roots({0.5, 1.5, 2.5})).squarefree);
}

TEST_CASE("format prints descending powers") {
  CHECK(UniPoly::from_double({2.0, -3.0, 1.0}).format(2) == "x^2 - 3.00 x + 2.00");
}

TEST_CASE("table I eliminant sextic") {
  const PowerSystem ps = fixtures::table1();
  const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(1));
  const EliminantCount ec = count_real_via_eliminant(ps, ss);
  REQUIRE(ec.poly.degree() == 6);
  const std::vector<double> want{1.0, 13.4913, 136.2685, -144.4123, 18.9004, -0.5871, 0.0017};
  const auto asc = ec.poly.coeffs_double();
  for (std::size_t k = 0; k < 7; ++k) CHECK(std::abs(asc[6 - k] - want[k]) < 5e-5);
  CHECK(ec.roots.descartes_max == 4);
  CHECK(ec.roots.sturm_positive == 4);
  CHECK(ec.roots.agrees);
  CHECK(ec.via_eliminant == 16);
  CHECK(ec.direct == 16);
  CHECK(ec.roots_above_one == 0);
}

TEST_CASE("b12 = 0 gives a quartic") {
  auto b = fixtures::kTable1;
  b[0] = 0.0;
  const PowerSystem ps = four_bus_network(b);
  const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(1));
  CHECK(ss.solutions.size() == 16);
  const EliminantCount ec = count_real_via_eliminant(ps, ss);
  REQUIRE(ec.poly.degree() == 4);
  const std::vector<double> want{1.0, -1.438, 0.611, -0.070, 0.002};
  const auto asc = ec.poly.coeffs_double();
  for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(asc[4 - k] - want[k]) < 5e-4);
  CHECK(ec.roots.sturm_positive == 4);
  CHECK(ec.via_eliminant == 16);
}

TEST_CASE("eliminant count agrees with direct count on random instances") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const PowerSystem ps = four_bus_network(fixtures::random_b(rng));
    const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(trial));
    const EliminantCount ec = count_real_via_eliminant(ps, ss);
    CHECK(ec.via_eliminant == ec.direct);
    CHECK(ec.roots.descartes_max >= ec.roots.sturm_positive);
    CHECK((ec.roots.descartes_max - ec.roots.sturm_positive) % 2 == 0);
  }
}

TEST_CASE("eliminant rejects unsupported networks") {
  const PowerSystem ps = fixtures::two_bus(2.0, 0.5);
  const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(1));
  CHECK_THROWS(count_real_via_eliminant(ps, ss));
}

TEST_CASE("vieta reconstruction from known squared values") {
  // two pairs (a, +-q) with coordinate 1 carrying q
  const std::vector<CVec> sols{{0.3, 0.5}, {0.3, -0.5}, {0.1, cplx(0.0, 2.0)}, {0.1, cplx(0.0, -2.0)}};
  const UniPoly p = build_eliminant(sols, 1);
  // roots 0.25 and -4: x^2 + 3.75 x - 1
  const auto c = p.coeffs_double();
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(-1.0));
  CHECK(c[1] == doctest::Approx(3.75));
  CHECK(c[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_eliminant({{0.3, 0.5}, {0.3, -0.5}, {0.2, 0.5}, {0.2, -0.5}}, 1), NonGenericCoordinate);
}
