// fklab: run one scenario (or the whole suite) and write its artifacts.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "fklab/config.hpp"
#include "fklab/laplace.hpp"
#include "fklab/scenarios.hpp"

namespace {

int exit_code(fklab::RunStatus s) {
  switch (s) {
    case fklab::RunStatus::pass:
      return 0;
    case fklab::RunStatus::fail:
      return 1;
    case fklab::RunStatus::control_failed:
      return 3;
  }
  return 1;
}

void print_verdicts(const fklab::RunRecord& r, const std::string& indent = "") {
  for (const auto& v : r.verdicts)
    std::fprintf(stderr, "%s%s  %s  value=%.6g target=%.6g tol=%.3g%s%s\n", indent.c_str(), v.pass ? "PASS" : "FAIL",
                 v.name.c_str(), v.value, v.target, v.tolerance, v.detail.empty() ? "" : "  ", v.detail.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annealed Brownian motion in a heavy-tailed Poissonian potential: numerical checks"};
  app.set_help_flag("--help", "print this help");  // -h would clash with --h
  app.require_subcommand(1);
  app.fallthrough();

  // every flag is forwarded as a config key so that files and flags share one validator
  const std::vector<std::pair<std::string, std::string>> flags{
      {"d", "spatial dimension"},
      {"alpha", "tail exponent of the shape function"},
      {"t", "time horizon"},
      {"t-ladder", "comma-separated horizons"},
      {"samples", "Monte Carlo sample count"},
      {"seed", "base seed"},
      {"h", "grid spacing"},
      {"dt", "time step"},
      {"quad-abs", "quadrature absolute tolerance"},
      {"quad-rel", "quadrature relative tolerance"},
      {"s", "argument of the log-MGF"},
      {"box", "box side for the density of states"},
      {"lambdas", "comma-separated energy levels"},
      {"engine", "eigen | splitting"},
      {"heat", "spectral | tridiagonal"},
      {"importance", "true | false"},
      {"threads", "worker threads"},
  };
  std::map<std::string, std::string> values;
  for (const auto& [key, help] : flags) app.add_option("--" + key, values[key], help);
  std::string out_dir, config_path;
  bool plots = false, ignore_control = false;
  app.add_option("--out", out_dir, "output directory (default: $FKLAB_OUT or fklab-out)");
  app.add_option("--config", config_path, "key = value or JSON config file");
  app.add_flag("--plots", plots, "write SVG plots");
  app.add_flag("--ignore-control", ignore_control, "run Monte Carlo parts even if the control check fails");

  std::map<std::string, CLI::App*> subs;
  for (const std::string& name : fklab::registered_scenarios())
    subs[name] = app.add_subcommand(name, name == "all" ? "full acceptance suite" : "run the " + name + " scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    // name the offending token: the first bare word that is neither an option value nor a scenario
    const auto& known = fklab::registered_scenarios();
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a.rfind("-", 0) == 0) {
        if (a != "--plots" && a != "--ignore-control" && a != "--help" && a.find('=') == std::string::npos) ++i;
        continue;
      }
      if (std::find(known.begin(), known.end(), a) == known.end()) {
        std::cerr << "unknown subcommand '" << a << "'\n";
        break;
      }
    }
    std::cerr << "\n" << app.help();
    return 2;
  }

  fklab::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = fklab::load_config(config_path);
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cfg.scenario = name;
    for (const auto& [key, help] : flags)
      if (app.count("--" + key)) fklab::apply_setting(cfg, key, values[key]);
    if (plots) cfg.plots = true;
    if (ignore_control) cfg.ignore_control = true;
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir;
    } else if (const char* env = std::getenv("FKLAB_OUT"); env && *env && cfg.out_dir == fklab::RunConfig{}.out_dir) {
      cfg.out_dir = env;
    }
    cfg.validate();
  } catch (const fklab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cfg.scenario == "constants") {
      const fklab::ModelParams p = cfg.resolve({1, 2.0, 1.0});
      const fklab::ConstantsBundle c = fklab::compute_constants(p.d, p.alpha);
      const fklab::Json j{{"d", p.d}, {"alpha", p.alpha}, {"a1", c.a1}, {"C", c.C},
                          {"a2", c.a2}, {"l1", c.l1},     {"l2", c.l2}};
      std::cout << j.dump(2) << "\n";
    } else if (cfg.scenario == "mgf") {
      const fklab::ModelParams p = cfg.resolve({1, 2.0, 1.0});
      const fklab::Model m({p.d, p.alpha, 1.0});
      fklab::QuadratureSpec q;
      q.abs_tol = cfg.quad_abs;
      q.rel_tol = cfg.quad_rel;
      const double exact = fklab::exact_mgf_V0(cfg.s, m, q);
      const double pred = -m.constants().a1 * std::pow(cfg.s, p.d / p.alpha);
      const fklab::Json j{{"d", p.d}, {"alpha", p.alpha},  {"s", cfg.s},
                          {"exact", exact}, {"predicted", pred}, {"residual", exact - pred}};
      std::cout << j.dump(2) << "\n";
    }
    const fklab::ScenarioOutput out = fklab::run_scenario(cfg);
    fklab::write_outputs(out, cfg.out_dir, cfg.plots);
    print_verdicts(out.record);
    for (const auto& child : out.children) {
      std::fprintf(stderr, "[%s] %s\n", child.record.scenario.c_str(), fklab::to_string(child.record.status()));
      print_verdicts(child.record, "  ");
    }
    const fklab::RunStatus st = out.record.status();
    std::fprintf(stderr, "status: %s (%s)\n", fklab::to_string(st), cfg.out_dir.c_str());
    return exit_code(st);
  } catch (const fklab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
