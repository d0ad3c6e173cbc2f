#include "fklab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fklab {

const std::vector<std::string>& registered_scenarios() {
  static const std::vector<std::string> names = {"constants", "mgf",        "laplace",     "spectrum",
                                                 "ids",       "tilted",     "localization", "confinement",
                                                 "occupation", "local-min", "ou-check",    "eigen-bound",
                                                 "all"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected a number, got '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 9.0e15) throw ConfigError(key, "expected an integer, got '" + v + "'");
  return static_cast<long long>(x);
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

std::string json_scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s;
    for (const auto& e : j) s += (s.empty() ? "" : ",") + json_scalar(e);
    return s;
  }
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number_unsigned()) return std::to_string(j.get<unsigned long long>());
  if (j.is_number()) {
    std::ostringstream o;
    o.precision(17);
    o << j.get<double>();
    return o.str();
  }
  throw ConfigError("", "unsupported JSON value");
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key_in, const std::string& value_in) {
  std::string key = trim(key_in);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value_in);
  if (key == "scenario") c.scenario = v;
  else if (key == "d") c.d = static_cast<int>(to_int(key, v));
  else if (key == "alpha") c.alpha = to_double(key, v);
  else if (key == "t") c.t = to_double(key, v);
  else if (key == "t_ladder") c.t_ladder = to_list(key, v);
  else if (key == "samples" || key == "n_samples") c.n_samples = static_cast<std::size_t>(std::max(0LL, to_int(key, v)));
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ConfigError(key, "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "h") c.h = to_double(key, v);
  else if (key == "dt") c.dt = to_double(key, v);
  else if (key == "quad_abs") c.quad_abs = to_double(key, v);
  else if (key == "quad_rel") c.quad_rel = to_double(key, v);
  else if (key == "s") c.s = to_double(key, v);
  else if (key == "box") c.box = to_double(key, v);
  else if (key == "lambdas") c.lambdas = to_list(key, v);
  else if (key == "engine") c.engine = v;
  else if (key == "heat") c.heat = v;
  else if (key == "importance") c.importance = to_bool(key, v);
  else if (key == "ignore_control") c.ignore_control = to_bool(key, v);
  else if (key == "out") c.out_dir = v;
  else if (key == "threads") c.threads = static_cast<int>(to_int(key, v));
  else if (key == "plots") c.plots = to_bool(key, v);
  else throw ConfigError(key, "unknown key");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig c;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    Json j;
    try {
      j = Json::parse(body);
    } catch (const Json::parse_error& e) {
      throw ConfigError(origin, std::string("invalid JSON: ") + e.what());
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object()) {
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
          try {
            apply_setting(c, jt.key(), json_scalar(jt.value()));
          } catch (const ConfigError& e) {
            throw ConfigError(it.key() + "." + e.key, std::string(e.what()).substr(e.key.size() + 2));
          }
        }
      } else {
        apply_setting(c, it.key(), json_scalar(it.value()));
      }
    }
  } else {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno), "expected 'key = value'");
      apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void RunConfig::validate() const {
  const auto& names = registered_scenarios();
  if (std::find(names.begin(), names.end(), scenario) == names.end())
    throw ConfigError("scenario", "'" + scenario + "' is not a registered scenario");
  if (d && *d < 1) throw ConfigError("d", "dimension must be at least 1");
  if (t && !(*t > 0)) throw ConfigError("t", "time horizon must be positive");
  if (alpha) {
    try {
      ModelParams{d.value_or(1), *alpha, t.value_or(1.0)}.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("alpha", e.what());
    }
  }
  for (double t : t_ladder)
    if (!(t > 0)) throw ConfigError("t_ladder", "entries must be positive");
  if (h < 0) throw ConfigError("h", "must be positive (0 selects the default)");
  if (dt < 0) throw ConfigError("dt", "must be positive (0 selects the default)");
  if (!(quad_abs > 0)) throw ConfigError("quad_abs", "tolerance must be positive");
  if (!(quad_rel > 0)) throw ConfigError("quad_rel", "tolerance must be positive");
  if (!(s > 0)) throw ConfigError("s", "must be positive");
  if (box < 0) throw ConfigError("box", "must be positive (0 selects the default)");
  for (double l : lambdas)
    if (!(l > 0)) throw ConfigError("lambdas", "entries must be positive");
  if (engine != "eigen" && engine != "splitting") throw ConfigError("engine", "must be 'eigen' or 'splitting'");
  if (heat != "spectral" && heat != "tridiagonal") throw ConfigError("heat", "must be 'spectral' or 'tridiagonal'");
  if (threads < 1) throw ConfigError("threads", "must be at least 1");
  if (n_samples == 1) throw ConfigError("samples", "need at least 2 samples");
}

ModelParams RunConfig::resolve(ModelParams p) const {
  if (d) p.d = *d;
  if (alpha) p.alpha = *alpha;
  if (t) p.t = *t;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(alpha ? "alpha" : "d", e.what());
  }
  return p;
}

Json RunConfig::to_json() const {
  auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
  return {{"scenario", scenario},
          {"d", opt(d)},
          {"alpha", opt(alpha)},
          {"t", opt(t)},
          {"t_ladder", t_ladder},
          {"samples", n_samples},
          {"seed", seed},
          {"h", h},
          {"dt", dt},
          {"quad_abs", quad_abs},
          {"quad_rel", quad_rel},
          {"s", s},
          {"box", box},
          {"lambdas", lambdas},
          {"engine", engine},
          {"heat", heat},
          {"importance", importance},
          {"ignore_control", ignore_control}};
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

}  // namespace fklab
