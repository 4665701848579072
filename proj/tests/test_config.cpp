#include "vwl/config.hpp"

#include <doctest.h>

using namespace vwl;

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config(
      R"({"group":"abelian:1","points":[1024],"extents":[40],"s":1,"dt":1e-3,"T":1,"potential":"delta"})");
  CHECK(c == RunConfig{});
  CHECK(serialize_config(c)["epsilon"]["count"] == 6);
}

TEST_CASE("serialize then parse is the identity") {
  RunConfig c;
  c.group = "heisenberg:1";
  c.points = {16, 16, 8};
  c.extents = {4, 4, 2};
  c.s = 0.4;
  c.potential = {"gaussian_well", 2.5, 0.75, true};
  c.mollifier = {"gaussian", 4, 0.3, 1.5};
  c.initial = {"random", 0.5, 1.2, -0.3, 2, true};
  c.epsilon = {0.9, 0.6, 7};
  c.embedding.q0 = 5.0;
  c.norm_q = 3.0;
  c.seed = 99;
  CHECK(parse_config(serialize_config(c).dump()) == c);
  CHECK(parse_config(serialize_config(RunConfig{}).dump()) == RunConfig{});
}

TEST_CASE("semantic errors name the field") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"epsilon":{"eps0":1.5}})"), doctest::Contains("epsilon must lie in (0,1]"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"epsilon":{"count":3}})"), doctest::Contains("epsilon.count >= 5"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"estimate":"prop2","s":1,"nu":2})"), doctest::Contains("Q > nu s"),
                       ConfigError);
  CHECK_NOTHROW(parse_config(R"({"estimate":"prop2","s":0.25})"));
  CHECK_THROWS_WITH_AS(parse_config(R"({"group":"abelian:2"})"), doctest::Contains("points"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"dt":"fast"})"), doctest::Contains("dt"), ConfigError);
}

TEST_CASE("unknown keys are rejected by path") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"sceme":"lie"})"), doctest::Contains("sceme"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"mollifier":{"radus":1}})"), doctest::Contains("mollifier.radus"),
                       ConfigError);
}

TEST_CASE("syntax errors carry line and column") {
  CHECK_THROWS_WITH_AS(parse_config("{\n  \"s\": 1,\n  \"dt\": ]\n}"), doctest::Contains("line 3, column"),
                       ConfigError);
}
