#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fklab/model.hpp"
#include "fklab/record.hpp"

namespace fklab {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& msg) : std::runtime_error(key + ": " + msg), key(std::move(key)) {}
  std::string key;
};

// Zero or empty numeric fields mean "scenario default".
struct RunConfig {
  std::string scenario = "all";
  // unset: scenario default
  std::optional<int> d;
  std::optional<double> alpha;
  std::optional<double> t;
  std::vector<double> t_ladder;
  std::size_t n_samples = 0;
  std::uint64_t seed = 20240611;
  double h = 0;
  double dt = 0;
  double quad_abs = 1e-10;
  double quad_rel = 1e-8;
  double s = 1e4;           // mgf argument
  double box = 0;           // ids box side
  std::vector<double> lambdas;
  std::string engine = "eigen";   // eigen | splitting
  std::string heat = "spectral";  // spectral | tridiagonal
  bool importance = true;
  bool ignore_control = false;    // run Monte Carlo parts even if the control fails
  std::string out_dir = "fklab-out";
  int threads = 1;
  bool plots = false;

  void validate() const;  // throws ConfigError naming the key
  ModelParams resolve(ModelParams defaults) const;
  // Fields that determine the payload (excludes out_dir, threads, plots).
  Json to_json() const;
  std::string hash() const;
};

const std::vector<std::string>& registered_scenarios();

// key = value lines ('#' comments) or a JSON object.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace fklab
