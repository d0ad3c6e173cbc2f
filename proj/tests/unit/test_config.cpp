#include "doctest.h"

#include <string>

#include "fklab/config.hpp"

using namespace fklab;

TEST_CASE("empty config gives defaults") {
  const RunConfig c = parse_config("");
  const RunConfig d;
  CHECK(c.to_json() == d.to_json());
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("key = value files") {
  const RunConfig c = parse_config("# comment\nscenario = tilted\nalpha = 3  # inline\nt-ladder = 1, 10,100\n"
                                   "samples=500\nimportance = no\n");
  CHECK(c.scenario == "tilted");
  CHECK(*c.alpha == 3.0);
  CHECK(c.t_ladder == std::vector<double>{1, 10, 100});
  CHECK(c.n_samples == 500);
  CHECK_FALSE(c.importance);
  CHECK_THROWS_AS(parse_config("alpha 3"), ConfigError);
}

TEST_CASE("JSON files and nested keys in errors") {
  const RunConfig c = parse_config(R"({"scenario": "ids", "lambdas": [0.5, 1.0], "model": {"d": 1, "alpha": 1.5}})");
  CHECK(c.lambdas == std::vector<double>{0.5, 1.0});
  CHECK(*c.alpha == 1.5);
  try {
    parse_config(R"({"model": {"alpha": "two"}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key == "model.alpha");
  }
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("validation names the offending key") {
  auto key_of = [](RunConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.key;
    }
    return std::string();
  };
  RunConfig c;
  c.alpha = 1.0;  // alpha must exceed d
  CHECK(key_of(c) == "alpha");
  c = {};
  c.engine = "magic";
  CHECK(key_of(c) == "engine");
  c = {};
  c.scenario = "nope";
  CHECK(key_of(c) == "scenario");
  c = {};
  c.threads = 0;
  CHECK(key_of(c) == "threads");
  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "seed", "1.5"), ConfigError);
}

TEST_CASE("flags override file values and the hash is stable") {
  RunConfig c = parse_config("seed = 5\nt = 2");
  const std::string h1 = c.hash();
  CHECK(parse_config("t = 2\nseed = 5").hash() == h1);
  apply_setting(c, "seed", "6");
  CHECK(c.seed == 6);
  CHECK(c.hash() != h1);
  RunConfig o = c;
  o.out_dir = "elsewhere";
  o.threads = 4;
  CHECK(o.hash() == c.hash());
}
