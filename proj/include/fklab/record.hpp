#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "fklab/model.hpp"

namespace fklab {

using Json = nlohmann::json;

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0;
  double target = 0;
  double tolerance = 0;
  std::string detail;
};

enum class RunStatus { pass, fail, control_failed };
const char* to_string(RunStatus s);

struct RunRecord {
  std::string scenario;
  ModelParams params{1, 2.0, 1.0};
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  Json config = Json::object();  // resolved configuration echo
  std::string config_hash;
  Json estimates = Json::object();
  Json fits = Json::object();
  std::vector<Verdict> verdicts;
  bool control_failed = false;

  void add_verdict(Verdict v) { verdicts.push_back(std::move(v)); }
  RunStatus status() const;
  bool passed() const { return status() == RunStatus::pass; }
  Json to_json() const;
  std::string dump() const;  // stable serialization
};

// Helpers for numbers that carry an interval or a tolerance.
Json with_interval(double value, double lo, double hi);
Json with_se(double value, double se);
Json with_tolerance(double value, double tolerance);

std::string fnv1a_hex(const std::string& s);

}  // namespace fklab
