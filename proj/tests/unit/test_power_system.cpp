#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "pfreal/power_system.hpp"

using namespace pfreal;

namespace {

PowerSystem path4() {
  PowerSystem ps;
  ps.buses = {{1, BusKind::slack, 1.0, 0, 0}, {2, BusKind::pv, 1.1, 0.2, 0}, {3, BusKind::pq, 1.0, -0.3, 0.1},
              {4, BusKind::pv, 0.9, 0.1, 0}};
  ps.lines = {{1, 2, 3.0, 0.5}, {2, 3, -2.0, 0.0}, {3, 4, 4.0, 1.0}};
  return ps;
}

CVec random_point(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d(0.0, 1.0);
  CVec x(n);
  for (auto& z : x) z = cplx(d(rng), d(rng));
  return x;
}

}  // namespace

TEST_CASE("validate rejects malformed networks") {
  PowerSystem ps = fixtures::table1();
  CHECK_NOTHROW(validate(ps));

  auto broken = ps;
  broken.buses[0].kind = BusKind::pv;
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.buses[1].kind = BusKind::slack;
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.lines.push_back({2, 1, 1.0});
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.lines.push_back({3, 3, 1.0});
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.buses[2].vm = 0.0;
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.buses[3].id = 7;
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.lines[0].g = -0.1;
  CHECK_THROWS_AS(validate(broken), InvalidInput);

  broken = ps;
  broken.lines[0].to = 9;
  CHECK_THROWS_AS(validate(broken), InvalidInput);
}

TEST_CASE("variable layout follows non-slack bus ids") {
  PowerSystem ps = path4();
  ps.buses[0].kind = BusKind::pv;
  ps.buses[2].kind = BusKind::slack;
  ps.buses[2].vm = 1.0;
  CHECK(non_slack_ids(ps) == std::vector<int>{1, 2, 4});
  CHECK(slack_bus(ps).id == 3);
  CHECK(build_system(ps).nvars() == 6);
}

TEST_CASE("flat-start constant solutions solve every zero-injection PV network") {
  const PolySystem sys = build_system(fixtures::table1());
  for (int mask = 0; mask < 8; ++mask) {
    CVec x(6, 0.0);
    for (int k = 0; k < 3; ++k) x[2 * k] = (mask >> k) & 1 ? 1.0 : -1.0;
    CHECK(residual_norm(sys, x) < 1e-14);
  }
}

TEST_CASE("polynomials equal computed minus specified injections") {
  const PowerSystem ps = path4();
  const PolySystem sys = build_system(ps);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CVec x = random_point(rng, sys.nvars());
    const auto f = evaluate<cplx>(sys, x);
    const auto inj = injections(ps, expand_voltages(ps, x));
    // bus 2 PV, bus 3 PQ, bus 4 PV
    CHECK(std::abs(f[0] - (inj.p[1] - 0.2)) < 1e-12);
    CHECK(std::abs(f[1] - (x[0] * x[0] + x[1] * x[1] - 1.21)) < 1e-12);
    CHECK(std::abs(f[2] - (inj.p[2] + 0.3)) < 1e-12);
    CHECK(std::abs(f[3] - (inj.q[2] - 0.1)) < 1e-12);
    CHECK(std::abs(f[4] - (inj.p[3] - 0.1)) < 1e-12);
    CHECK(std::abs(f[5] - (x[4] * x[4] + x[5] * x[5] - 0.81)) < 1e-12);
  }
}

TEST_CASE("rectangular injections agree with the polar form") {
  PowerSystem ps = path4();
  ps.buses[2].kind = BusKind::pv;
  ps.buses[2].vm = 1.05;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> th(ps.size());
    for (auto& t : th) t = angle(rng);
    BusVoltages v;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      v.vd.emplace_back(ps.buses[i].vm * std::cos(th[i]));
      v.vq.emplace_back(ps.buses[i].vm * std::sin(th[i]));
    }
    const auto rect = injections(ps, v);
    const auto polar = polar_active_injections(ps, th);
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(std::abs(rect.p[i].real() - polar[i]) < 1e-12);
  }
}

TEST_CASE("each equation only involves neighbouring buses") {
  const PolySystem sys = build_system(path4());
  // bus 4 (variables 4, 5) touches bus 3 only; its equations never contain bus 2 (variables 0, 1).
  for (std::size_t eq : {4u, 5u})
    for (const auto& t : sys[eq].terms()) CHECK(t.exponents[0] + t.exponents[1] == 0);
  // bus 2 touches buses 1 and 3, never bus 4.
  for (std::size_t eq : {0u, 1u})
    for (const auto& t : sys[eq].terms()) CHECK(t.exponents[4] + t.exponents[5] == 0);
}

TEST_CASE("lossless active power sums to zero for any voltages") {
  const PowerSystem ps = fixtures::table1();
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const CVec x = random_point(rng, 6);
    const auto inj = injections(ps, expand_voltages(ps, x));
    cplx sum = 0.0;
    for (const auto& p : inj.p) sum += p;
    CHECK(std::abs(sum) < 1e-12);
    for (const Line& l : ps.lines) {
      const auto v = expand_voltages(ps, x);
      CHECK(std::abs(line_flow(l, l.from - 1, l.to - 1, v) + line_flow(l, l.to - 1, l.from - 1, v)) < 1e-12);
    }
  }
}

TEST_CASE("normalize_vm rescales susceptances so unit voltages reproduce the injections") {
  PowerSystem ps = fixtures::table1();
  ps.buses[1].vm = 1.05;
  ps.buses[2].vm = 0.97;
  ps.buses[3].vm = 1.02;
  ps.buses[0].vm = 1.01;
  const PowerSystem unit = normalize_vm(ps);
  for (const Bus& b : unit.buses) CHECK(b.vm == 1.0);
  std::vector<double> th{0.0, 0.4, -1.2, 2.5};
  const auto a = polar_active_injections(ps, th);
  const auto b = polar_active_injections(unit, th);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);

  CHECK_THROWS_AS(normalize_vm(path4()), InvalidInput);
}

TEST_CASE("solution count bounds") {
  CHECK(complex_bound(2) == 2);
  CHECK(complex_bound(3) == 6);
  CHECK(complex_bound(4) == 20);
  CHECK(complex_bound(5) == 70);
  CHECK(bezout_bound(2) == 4);
  CHECK(bezout_bound(3) == 16);
  CHECK(bezout_bound(4) == 64);
  CHECK(complex_bound(fixtures::table1()) == 20);
  CHECK(bezout_bound(fixtures::table1()) == 64);
  CHECK_THROWS_AS(complex_bound(1), InvalidInput);
}
