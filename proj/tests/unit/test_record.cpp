#include "doctest.h"

#include <cmath>

#include "fklab/record.hpp"

using namespace fklab;

TEST_CASE("status follows verdicts and control") {
  RunRecord r;
  CHECK(r.status() == RunStatus::pass);
  r.add_verdict({"a", true, 1, 1, 0, ""});
  CHECK(r.passed());
  r.add_verdict({"b", false, 2, 1, 0, ""});
  CHECK(r.status() == RunStatus::fail);
  r.control_failed = true;
  CHECK(r.status() == RunStatus::control_failed);
  CHECK(std::string(to_string(RunStatus::control_failed)) != to_string(RunStatus::fail));
}

TEST_CASE("serialization is deterministic and keeps non-finite values") {
  RunRecord r;
  r.scenario = "x";
  r.estimates["b"] = 2.0;
  r.estimates["a"] = with_interval(1.0, 0.5, 1.5);
  r.estimates["nested"] = Json{{"v", -INFINITY}, {"w", std::vector<double>{NAN, INFINITY}}};
  r.fits["slope"] = with_se(0.4, 0.01);
  r.add_verdict({"v", true, 1, 1, 0.1, "ok"});
  const std::string s = r.dump();
  CHECK(s == r.dump());
  const Json j = Json::parse(s);
  CHECK(j["estimates"]["nested"]["v"] == "-inf");
  CHECK(j["estimates"]["nested"]["w"][0] == "nan");
  CHECK(j["estimates"]["nested"]["w"][1] == "inf");
  CHECK(s.find("\"a\"") < s.find("\"b\""));
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
