#include "fklab/record.hpp"

#include <cmath>
#include <cstdio>

namespace fklab {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::pass: return "pass";
    case RunStatus::fail: return "fail";
    case RunStatus::control_failed: return "control_failed";
  }
  return "fail";
}

RunStatus RunRecord::status() const {
  if (control_failed) return RunStatus::control_failed;
  for (const auto& v : verdicts)
    if (!v.pass) return RunStatus::fail;
  return RunStatus::pass;
}

namespace {

// JSON has no NaN/inf; keep them visible as strings
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json sanitized(const Json& j) {
  if (j.is_number_float()) return number(j.get<double>());
  if (j.is_array() || j.is_object()) {
    Json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = sanitized(*it);
    return out;
  }
  return j;
}

}  // namespace

Json RunRecord::to_json() const {
  Json j;
  j["scenario"] = scenario;
  j["params"] = {{"d", params.d}, {"alpha", params.alpha}, {"t", params.t}};
  j["seed"] = seed;
  j["n_samples"] = n_samples;
  j["config"] = config;
  j["config_hash"] = config_hash;
  j["version"] = FKLAB_VERSION;
  j["estimates"] = sanitized(estimates);
  j["fits"] = sanitized(fits);
  Json vs = Json::array();
  for (const auto& v : verdicts)
    vs.push_back({{"name", v.name},
                  {"pass", v.pass},
                  {"value", number(v.value)},
                  {"target", number(v.target)},
                  {"tolerance", number(v.tolerance)},
                  {"detail", v.detail}});
  j["verdicts"] = vs;
  j["status"] = to_string(status());
  return j;
}

std::string RunRecord::dump() const { return to_json().dump(2) + "\n"; }

Json with_interval(double value, double lo, double hi) {
  return {{"value", number(value)}, {"lo", number(lo)}, {"hi", number(hi)}};
}
Json with_se(double value, double se) {
  return {{"value", number(value)}, {"se", number(se)}, {"lo", number(value - 1.959963984540054 * se)},
          {"hi", number(value + 1.959963984540054 * se)}};
}
Json with_tolerance(double value, double tolerance) {
  return {{"value", number(value)}, {"tolerance", number(tolerance)}};
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fklab
