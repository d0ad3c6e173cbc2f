#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fklab/config.hpp"
#include "fklab/record.hpp"

namespace fklab {

struct ScenarioOutput {
  RunRecord record;
  std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text
  std::vector<std::pair<std::string, std::string>> plots;   // file name, SVG text
  std::vector<ScenarioOutput> children;                     // used by the suite
};

ScenarioOutput run_constants(const RunConfig& cfg);
ScenarioOutput run_mgf(const RunConfig& cfg);
ScenarioOutput run_laplace(const RunConfig& cfg);
ScenarioOutput run_spectrum(const RunConfig& cfg);
ScenarioOutput run_tilted(const RunConfig& cfg);
ScenarioOutput run_local_min_stats(const RunConfig& cfg);
ScenarioOutput run_localization(const RunConfig& cfg);
ScenarioOutput run_confinement(const RunConfig& cfg);
ScenarioOutput run_occupation(const RunConfig& cfg);
ScenarioOutput run_ou_limit(const RunConfig& cfg);
ScenarioOutput run_ids(const RunConfig& cfg);
ScenarioOutput run_eigen_bound(const RunConfig& cfg);
// Every scenario above with its default (acceptance) settings.
ScenarioOutput run_suite(const RunConfig& cfg);

// Dispatch on cfg.scenario; validates the config first.
ScenarioOutput run_scenario(const RunConfig& cfg);

// Writes record.json, CSV tables and (optionally) plots under dir; children go to subdirectories.
void write_outputs(const ScenarioOutput& out, const std::string& dir, bool plots);

}  // namespace fklab
