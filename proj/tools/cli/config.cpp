#include "config.hpp"

#include <fstream>
#include <set>

namespace hmin::cli {

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& dst) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    dst = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be a finite number");
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j, RunConfig cfg) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "case", "n", "K", "c", "a", "b", "span", "tol", "a_min", "a_max", "count", "q_max", "out", "format",
      "orbit_resolution", "curve_resolution", "fiber_resolution", "jobs", "constant", "hopf", "closed", "cloud",
      "output", "deterministic"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  read(j, "case", cfg.case_name);
  read(j, "n", cfg.n);
  read(j, "K", cfg.K);
  read(j, "c", cfg.c);
  read(j, "a", cfg.a);
  read(j, "b", cfg.b);
  read(j, "span", cfg.span);
  read(j, "tol", cfg.tol);
  read(j, "a_min", cfg.a_min);
  read(j, "a_max", cfg.a_max);
  read(j, "count", cfg.count);
  read(j, "q_max", cfg.q_max);
  read(j, "out", cfg.out);
  read(j, "format", cfg.format);
  read(j, "orbit_resolution", cfg.orbit_resolution);
  read(j, "curve_resolution", cfg.curve_resolution);
  read(j, "fiber_resolution", cfg.fiber_resolution);
  read(j, "jobs", cfg.jobs);
  read(j, "constant", cfg.constant);
  read(j, "hopf", cfg.hopf);
  read(j, "closed", cfg.closed);
  read(j, "cloud", cfg.cloud);
  read(j, "output", cfg.output);
  read(j, "deterministic", cfg.deterministic);
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j, std::move(base));
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["case"] = cfg.case_name;
  j["n"] = cfg.n;
  j["c"] = cfg.c;
  if (std::isfinite(cfg.K)) j["K"] = cfg.K;
  return j;
}

void validate(const RunConfig& cfg, Needs what) {
  if (!cfg.deterministic) throw ConfigError("non-deterministic runs are not supported");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
  finite(cfg.tol, "tol");
  if (cfg.tol < 1e-14 || cfg.tol > 1e-4) throw ConfigError("tol must lie in [1e-14, 1e-4]");
  for (double ci : cfg.c) finite(ci, "c");
  if (what == Needs::Cloud) {
    if (cfg.cloud.empty()) throw ConfigError("--cloud is required");
    return;
  }
  make_case(cfg);
  if (what == Needs::Case) return;
  finite(cfg.K, "K");
  if (cfg.K == 0.0) throw ConfigError("K must be nonzero");
  switch (what) {
    case Needs::Solve:
      finite(cfg.a, "a");
      finite(cfg.b, "b");
      finite(cfg.span, "span");
      if (cfg.span == 0.0) throw ConfigError("span must be nonzero");
      break;
    case Needs::Scan:
      finite(cfg.a_min, "a_min");
      finite(cfg.a_max, "a_max");
      if (!(cfg.a_min < cfg.a_max)) throw ConfigError("a_min must be < a_max");
      if (cfg.count < 2) throw ConfigError("scan count must be >= 2");
      if (cfg.q_max < 1) throw ConfigError("q_max must be >= 1");
      break;
    case Needs::Lift:
      if (!cfg.constant) {
        finite(cfg.a, "a");
        finite(cfg.b, "b");
        finite(cfg.span, "span");
        if (cfg.span == 0.0 && !cfg.closed) throw ConfigError("span must be nonzero");
        if (cfg.closed && cfg.b != 0.0) throw ConfigError("--closed needs a turning start (b = 0)");
      }
      if (cfg.orbit_resolution < 4 || cfg.curve_resolution < 4) throw ConfigError("resolutions must be >= 4");
      if (cfg.fiber_resolution < 1) throw ConfigError("fiber resolution must be >= 1");
      if (cfg.q_max < 1) throw ConfigError("q_max must be >= 1");
      break;
    default:
      break;
  }
}

ActionCase make_case(const RunConfig& cfg) {
  try {
    return ActionCase::make(parse_case_variant(cfg.case_name), cfg.n, cfg.c);
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace hmin::cli
