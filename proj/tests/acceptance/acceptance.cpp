// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fklab/config.hpp"
#include "fklab/model.hpp"
#include "fklab/scenarios.hpp"
#include "fklab/semigroup.hpp"

using namespace fklab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string failed_verdicts(const RunRecord& r) {
  std::string s;
  for (const Verdict& v : r.verdicts)
    if (!v.pass) s += (s.empty() ? "" : "; ") + v.name;
  return s;
}

Outcome from_record(const RunRecord& r) {
  Outcome o;
  o.pass = r.passed();
  std::ostringstream ss;
  ss << r.verdicts.size() << " verdicts";
  if (r.control_failed) ss << ", control failed";
  const std::string f = failed_verdicts(r);
  if (!f.empty()) ss << ", failing: " << f;
  o.detail = ss.str();
  return o;
}

RunConfig base(const std::string& scenario, int threads) {
  RunConfig c;
  c.scenario = scenario;
  c.threads = threads;
  return c;
}

const Verdict* find_verdict(const RunRecord& r, const std::string& name) {
  for (const Verdict& v : r.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int threads = 1;
  std::set<int> only;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"constants vs quadrature and eigensolver", [&] { return from_record(run_scenario(base("constants", threads)).record); }},
      {"log-MGF asymptotics", [&] { return from_record(run_scenario(base("mgf", threads)).record); }},
      {"Laplace second-order term and two-point bound",
       [&] { return from_record(run_scenario(base("laplace", threads)).record); }},
      {"ground-state transform of the harmonic kernel",
       [&] {
         EvolutionSpec spec;
         spec.dt = 1e-4;
         const GroundstateReport g = groundstate_transform_check(compute_constants(1, 2.0).C, 1.0, spec, 0.005);
         char buf[160];
         std::snprintf(buf, sizeof buf, "sup rel error %.3g (tol 1e-3), mass rel error %.3g", g.sup_rel_error,
                       g.mass_rel_error);
         return Outcome{g.sup_rel_error <= 1e-3, buf};
       }},
      {"tilted local-minimum mean, variance and CLT",
       [&] { return from_record(run_scenario(base("local-min", threads)).record); }},
      {"localization exponent",
       [&] {
         RunConfig c = base("localization", threads);
         c.ignore_control = true;  // report the Monte Carlo exponent even when the control misses
         const RunRecord r = run_scenario(c).record;
         Outcome o = from_record(r);
         if (const Verdict* v = find_verdict(r, "median radius exponent")) {
           char buf[96];
           std::snprintf(buf, sizeof buf, "; MC exponent %.4f (target 0.375 +- 0.1)", v->value);
           o.detail += buf;
         }
         if (const Verdict* v = find_verdict(r, "quadratic control: median radius exponent")) {
           char buf[96];
           std::snprintf(buf, sizeof buf, "; control exponent %.4f (target 0.375 +- 0.02)", v->value);
           o.detail += buf;
         }
         return o;
       }},
      {"occupation second moment", [&] { return from_record(run_scenario(base("occupation", threads)).record); }},
      {"Lifshitz tail slope", [&] { return from_record(run_scenario(base("ids", threads)).record); }},
      {"lower bound on the partition function", [&] { return from_record(run_scenario(base("eigen-bound", threads)).record); }},
      {"determinism of run records",
       [&] {
         std::vector<RunConfig> cfgs{base("constants", threads), base("mgf", threads), base("laplace", threads),
                                     base("spectrum", threads)};
         RunConfig lm = base("local-min", threads);
         lm.n_samples = 300;
         lm.t_ladder = {1e2, 1e3};
         RunConfig eb = base("eigen-bound", threads);
         eb.n_samples = 20;
         RunConfig oc = base("occupation", threads);
         oc.n_samples = 20;
         oc.t_ladder = {16, 64};
         cfgs.insert(cfgs.end(), {lm, eb, oc});
         std::string bad;
         for (const RunConfig& c : cfgs) {
           RunConfig other = c;
           other.threads = c.threads == 1 ? 2 : 1;  // thread count must not change the payload
           if (run_scenario(c).record.dump() != run_scenario(other).record.dump())
             bad += (bad.empty() ? "" : ", ") + c.scenario;
         }
         return Outcome{bad.empty(), bad.empty() ? std::to_string(cfgs.size()) + " records byte-identical"
                                                 : "differing: " + bad};
       }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::printf("%s criterion %d: %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
