#pragma once

// Run configuration shared by all subcommands. A JSON file supplies the
// base values (--config), explicit flags override them. Keys are listed in
// docs/config.md.

#include "hmin/ambient.hpp"
#include "hmin/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace hmin::cli {

class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

struct RunConfig {
  std::string case_name = "cpn-so";
  int n = 2;
  double K = NAN;
  std::vector<double> c;
  double a = NAN;
  double b = 0.0;
  double span = 20.0;
  double tol = 1e-10;
  double a_min = NAN;
  double a_max = NAN;
  int count = 200;
  std::int64_t q_max = 64;
  std::string out = ".";
  std::string format = "csv";
  int orbit_resolution = 16;
  int curve_resolution = 200;
  int fiber_resolution = 16;
  unsigned jobs = 1;
  bool constant = false;
  bool hopf = false;
  bool closed = false;
  std::string cloud;
  std::string output;
  bool deterministic = true;
};

RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

enum class Needs { Case, Solve, Scan, Lift, Cloud };
// Throws ConfigError.
void validate(const RunConfig& cfg, Needs what);

ActionCase make_case(const RunConfig& cfg);

}  // namespace hmin::cli
