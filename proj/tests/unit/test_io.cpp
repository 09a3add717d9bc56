#include <doctest.h>

#include "fixtures.hpp"
#include "pfreal/io.hpp"

using namespace pfreal;

namespace {

const char* kTwoBus =
    R"({"buses":[{"id":2,"type":"pv","vm":1.0,"p":0.5},{"id":1,"type":"slack","vm":1.0}],
        "lines":[{"from":1,"to":2,"b":2.0}]})";

}  // namespace

TEST_CASE("parse a system and write it back") {
  const PowerSystem ps = parse_system_json(kTwoBus);
  REQUIRE(ps.size() == 2);
  CHECK(ps.buses[0].kind == BusKind::slack);
  CHECK(ps.buses[1].p == 0.5);
  CHECK(ps.lines[0].b == 2.0);
  const PowerSystem again = parse_system_json(system_to_json(ps));
  CHECK(again.buses[1].p == ps.buses[1].p);
  CHECK(again.lines[0].b == ps.lines[0].b);

  const PowerSystem t1 = parse_system_json(system_to_json(fixtures::table1()));
  CHECK(build_system(t1) == build_system(fixtures::table1()));
}

TEST_CASE("malformed or unknown input is rejected") {
  CHECK_THROWS_AS(parse_system_json("{\"buses\": ["), JsonError);
  CHECK_THROWS_AS(parse_system_json(R"({"buses":[],"lines":[],"name":"x"})"), JsonError);
  CHECK_THROWS_AS(parse_system_json(R"({"buses":[{"id":1,"type":"slack","vm":1,"angle":0}],"lines":[]})"),
                  JsonError);
  CHECK_THROWS_AS(parse_system_json(R"({"buses":[{"id":1,"type":"slack","vm":1},{"id":2,"type":"xx"}],"lines":[]})"),
                  JsonError);
  CHECK_THROWS_AS(parse_system_json(R"({"buses":[{"id":1,"type":"slack","vm":1},{"id":3,"type":"pv","vm":1}],"lines":[]})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_system_json(R"({"buses":[{"id":1,"type":"slack","vm":1},{"id":2,"type":"pv","vm":"1"}],"lines":[]})"),
                  JsonError);
  CHECK_THROWS_AS(parse_system_json(R"({"buses":[{"id":1,"type":"slack","vm":1},{"id":2,"type":"pv","vm":1}],
                                       "lines":[{"from":1,"to":2}]})"),
                  JsonError);
  CHECK_THROWS_AS(load_system("/nonexistent/system.json"), JsonError);
}

TEST_CASE("fixed formatting folds negative zero") {
  CHECK(format_fixed(-0.0, 4) == "0.0000");
  CHECK(format_fixed(-1e-12, 10) == "0.0000000000");
  CHECK(format_fixed(-0.5, 2) == "-0.50");
  CHECK(format_fixed(1.25, 1) == "1.2");
}

TEST_CASE("solution table layout") {
  const PowerSystem ps = fixtures::table1();
  const SolveReport r = solve_report(ps, 1);
  CHECK(r.n_complex == 20);
  CHECK(r.n_real == 16);
  CHECK(r.n_trivial == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(r.records[i].is_trivial);
  for (std::size_t i = 8; i < 16; ++i) CHECK((r.records[i].is_real && !r.records[i].is_trivial));
  for (std::size_t i = 16; i < 20; ++i) CHECK_FALSE(r.records[i].is_real);

  const std::string csv = solutions_csv(ps, r);
  CHECK(csv.rfind("sol_id,vd2,vq2,vd3,vq3,vd4,vq4,is_real,is_trivial,residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
  CHECK(csv.find("-0.0000000000") == std::string::npos);
  CHECK(solutions_csv(ps, solve_report(ps, 1)) == csv);

  const std::string json = solutions_json(ps, r);
  CHECK(json.find("\"n_real\": 16") != std::string::npos);
}

TEST_CASE("eliminant report names the variable") {
  const PowerSystem ps = fixtures::table1();
  const SolutionSet ss = solve_all(build_system(ps), HomotopyConfig::from_seed(1));
  const std::string j = eliminant_json(ps, count_real_via_eliminant(ps, ss));
  CHECK(j.find("\"variable\": \"vq4^2\"") != std::string::npos);
  CHECK(j.find("x^6 + 13.4913 x^5 + 136.2685 x^4 - 144.4123 x^3 + 18.9004 x^2 - 0.5871 x + 0.0017") !=
        std::string::npos);
}
