#include "doctest.h"

#include "fklab/scenarios.hpp"

using namespace fklab;

TEST_CASE("constants and mgf scenarios pass and are reproducible") {
  RunConfig c;
  c.scenario = "constants";
  const ScenarioOutput a = run_scenario(c);
  CHECK(a.record.passed());
  CHECK_FALSE(a.record.verdicts.empty());
  c.scenario = "mgf";
  const ScenarioOutput m1 = run_scenario(c), m2 = run_scenario(c);
  CHECK(m1.record.dump() == m2.record.dump());
  CHECK(m1.record.passed());
}

TEST_CASE("unknown scenario is a config error") {
  RunConfig c;
  c.scenario = "bogus";
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
}

TEST_CASE("every registered scenario dispatches") {
  for (const std::string& s : registered_scenarios()) CHECK_FALSE(s.empty());
  CHECK(registered_scenarios().back() == "all");
}
