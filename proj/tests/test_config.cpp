#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "kummer/config.hpp"

using namespace kummer;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "t.conf");
}

RunConfig sample() {
  RunConfig c;
  c.name = "sample";
  c.lattice = {"1, 0", "zeta4, 0", "0, 1", "0, zeta4"};
  c.generators = {"i, 0; 0, -i", "0, -1; 1, 0"};
  c.a = 0.75;
  c.grid_size = 1024;
  c.s_min = 1e-3;
  c.s_max = 1e3;
  c.eps_list = {0.2, 0.1, 0.05};
  c.deltas = {-1.0};
  c.ledger_eps = {"1/3", "2/7"};
  c.vol_T = "16";
  c.tolerances["eh_ode"] = 3.3e-9;
  c.stages = {"classify", "ledger"};
  c.seed = 7;
  c.expect_points = 7;
  c.expect_d_gamma = 0;
  c.expect_types = {"D4 2"};
  c.expect_point = {{"(1+i)/2, 0", "Z4"}};
  return c;
}

}  // namespace

TEST_CASE("defaults are valid and describe Z2 on the square lattice") {
  RunConfig c;
  CHECK_NOTHROW(validate_config(c));
  const auto p = c.pair();
  CHECK(p.lattice_basis.cols() == 4);
  CHECK(p.generators.size() == 1);
  CHECK(p.generators[0](0, 0) == Cyclotomic(-1));
  CHECK(c.stages == all_stages());
  CHECK(c.tolerance("ma_contraction") == 0.5);
}

TEST_CASE("serialize then parse round-trips") {
  const RunConfig c = sample();
  const RunConfig back = parse(serialize_config(c));
  CHECK(back == c);
  CHECK(serialize_config(back) == serialize_config(c));
  CHECK(back.pair().generators[1](0, 1) == Cyclotomic(-1));
  const auto eps = back.ledger_eps_values();
  CHECK(eps[1] == Rational(2) / 7);
}

TEST_CASE("doubles survive the round trip bit for bit") {
  RunConfig c;
  c.eps_list = {1.0 / 3.0, 0.1 + 0.2, 1e-17};
  CHECK(parse(serialize_config(c)).eps_list == c.eps_list);
}

TEST_CASE("sections, comments and repeated generators") {
  const auto c = parse(
      "# comment\n[run]\nname = x  # trailing\nstages = ledger\n"
      "[group]\ngenerator = i, 0; 0, -i\ngenerator = 0, -1; 1, 0\n"
      "[expect]\npoint = 1/2, i/2 : Z4\ntype = A3 3\n");
  CHECK(c.name == "x");
  CHECK(c.stages == std::vector<std::string>{"ledger"});
  CHECK(c.generators.size() == 2);
  REQUIRE(c.expect_point.size() == 1);
  CHECK(c.expect_point[0].point == "1/2, i/2");
  CHECK(c.expect_point[0].group == "Z4");
  CHECK(c.stage_enabled("ledger"));
  CHECK_FALSE(c.stage_enabled("forms"));
}

TEST_CASE("errors name the source and line") {
  CHECK_THROWS_WITH_AS(parse("[run]\nbogus = 1\n"), "t.conf:2: unknown key 'bogus'", ConfigError);
  CHECK_THROWS_WITH_AS(parse("name = x\n"), "t.conf:1: key outside a section", ConfigError);
  CHECK_THROWS_WITH_AS(parse("[nope]\nx = 1\n"), "t.conf:2: unknown section 'nope'", ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run]\nname\n"), "t.conf:2: expected key = value", ConfigError);
  CHECK_THROWS_WITH_AS(parse("[run\n"), "t.conf:1: unterminated section header", ConfigError);
  CHECK_THROWS_WITH_AS(parse("[model]\na = one\n"), "t.conf:2: not a number: 'one'", ConfigError);
  CHECK_THROWS_AS(parse("[tolerances]\nnot_a_key = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[lattice]\nv1 = 1, 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[expect]\npoint = 0, 0\n"), ConfigError);
}

TEST_CASE("validation rejects broken invariants") {
  CHECK_THROWS_WITH_AS(parse("[sweep]\neps =\n"), "t.conf: eps_list is empty", ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\neps = 0.01, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[sweep]\neps = 0.1, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[tolerances]\neh_ode = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[tolerances]\nma_contraction = -0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nstages = classify, plot\n"), ConfigError);
  CHECK_THROWS_AS(parse("[ledger]\nvol_T = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[ledger]\nvol_T = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[group]\ngenerator = 1, 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[group]\ngenerator = q, 0; 0, 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\ns_min = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\ngrid_size = 4\n"), ConfigError);
  RunConfig c;
  c.tolerances["forms_wedge_slope"] = 0.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("list helpers") {
  CHECK(parse_double_list(" 0.1,0.05 , 2e-2") == std::vector<double>{0.1, 0.05, 0.02});
  CHECK(parse_double_list("").empty());
  CHECK(split_list("a; b ;;c", ';') == std::vector<std::string>{"a", "b", "c"});
  CHECK_THROWS_AS(parse_double_list("0.1, x"), ConfigError);
}

TEST_CASE("model grid honours the configured range") {
  RunConfig c;
  CHECK(c.model_grid().size() == RadialGrid::default_for(1.0).size());
  c.s_min = 1e-2;
  c.s_max = 1e2;
  c.grid_size = 300;
  const auto g = c.model_grid();
  CHECK(g.size() == 300);
  CHECK(g.s[0] == doctest::Approx(1e-2));
  CHECK(g.s[299] == doctest::Approx(1e2));
}
