#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "commands.hpp"
#include "config.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hmin;
using namespace hmin::cli;
namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hmin_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "cd '" + scratch().string() + "' && '" HMIN_CLI "' " + args + " > last.log 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json json_at(const std::string& rel) { return nlohmann::json::parse(slurp(scratch() / rel)); }

}  // namespace

TEST_CASE("config parsing and validation") {
  RunConfig c = config_from_json(nlohmann::json::parse(R"({"case": "cn-torus", "n": 2, "c": [0.3, -0.2], "K": 1})"));
  CHECK(c.case_name == "cn-torus");
  CHECK(c.c == std::vector<double>{0.3, -0.2});
  CHECK(make_case(c).variant() == CaseVariant::CnTorus);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"K": "x"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"speed": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1]")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);

  RunConfig s;
  s.K = 0.05;
  s.a = 0.7;
  CHECK_NOTHROW(validate(s, Needs::Solve));
  for (double tol : {1e-15, 1e-3, double(NAN)}) {
    RunConfig t = s;
    t.tol = tol;
    CHECK_THROWS_AS(validate(t, Needs::Solve), ConfigError);
  }
  for (double tol : {1e-14, 1e-4}) {
    RunConfig t = s;
    t.tol = tol;
    CHECK_NOTHROW(validate(t, Needs::Solve));
  }
  RunConfig g = s;
  g.a_min = 0.1;
  g.a_max = 1.0;
  g.count = 1;
  CHECK_THROWS_AS(validate(g, Needs::Scan), ConfigError);
  g.count = 2;
  CHECK_NOTHROW(validate(g, Needs::Scan));
  RunConfig bad = s;
  bad.a = INFINITY;
  CHECK_THROWS_AS(validate(bad, Needs::Solve), ConfigError);
  bad = s;
  bad.deterministic = false;
  CHECK_THROWS_AS(validate(bad, Needs::Solve), ConfigError);
  bad = s;
  bad.case_name = "cpn-su";
  CHECK_THROWS_AS(validate(bad, Needs::Solve), ConfigError);
  CHECK(sidecar_path("out/cloud.csv") == "out/cloud.json");
}

TEST_CASE("solve examples") {
  CHECK(run("solve --case cn-so --n 2 --K 3 --a 1 --b 0 --out s1") == 0);
  CHECK(json_at("s1/trajectory.json")["classification"] == "Constant");
  CHECK(run("solve --case cpn-so --n 2 --K -0.1 --a 0.7853981634 --b 0 --span 50 --out s2") == 0);
  CHECK(json_at("s2/trajectory.json")["classification"] == "Complete");
  CHECK(run("solve --case cn-so --n 2 --K 2 --a 1 --b 0 --out s3") == 3);
  CHECK(slurp(scratch() / "last.log").find("lambda = 0") != std::string::npos);
  CHECK(run("solve --case cn-torus --n 2 --c 1 -0.5 --K 2 --a 1.2 --b 0.3 --out s4") != 2);
  CHECK(run("solve --case cn-so --n 2 --K 3 --a 1 --tol 1e-3") == 2);
  CHECK(run("solve --case cn-so --n 2 --K 3") == 2);
  CHECK(run("solve --case cpn-so --n 2 --K 0.05 --a 2.0") == 2);
  CHECK(run("frobnicate") == 2);
  const std::string head = slurp(scratch() / "s2/trajectory.csv").substr(0, 17);
  CHECK(head == "theta,x,xp,drift\n");
}

TEST_CASE("config file with flag overrides") {
  std::ofstream(scratch() / "cfg.json") << R"({"case": "cpn-so", "n": 2, "K": 0.05, "a_min": 0.2, "a_max": 1.4, "count": 6, "out": "cf"})";
  REQUIRE(run("scan --config cfg.json") == 0);
  REQUIRE(run("scan --config cfg.json --out cf3 --jobs 3") == 0);
  CHECK(slurp(scratch() / "cf/scan.csv") == slurp(scratch() / "cf3/scan.csv"));
  const std::string csv = slurp(scratch() / "cf/scan.csv");
  CHECK(csv.rfind("a,lambda,omega,omega_over_pi,p,q,closure_residual,status\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(run("scan --config cfg.json --count 1") == 2);
  std::ofstream(scratch() / "bad.json") << R"({"case": "cpn-so", "colour": 1})";
  CHECK(run("scan --config bad.json") == 2);
}

TEST_CASE("closed search reports hits with small closure") {
  REQUIRE(run("closed --case cpn-so --n 2 --K 0.05 --a-min 0.3 --a-max 1.2 --count 30 --out cl") == 0);
  const nlohmann::json j = json_at("cl/closed.json");
  CHECK(j["hits"].get<int>() > 0);
  std::istringstream csv(slurp(scratch() / "cl/closed.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "a,lambda,omega,omega_over_pi,p,q,closure_residual");
  int rows = 0;
  while (std::getline(csv, line)) {
    const double closure = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(closure < 1e-6);
    ++rows;
  }
  CHECK(rows == j["hits"].get<int>());
}

TEST_CASE("lift then verify") {
  REQUIRE(run("lift --constant --case cn-so --n 2 --K 3 --orbit-resolution 8 --curve-resolution 32 --out lc") == 0);
  CHECK(run("verify --cloud lc/cloud.csv --out lc") == 0);
  const nlohmann::json rep = json_at("lc/verify.json");
  CHECK(rep["passed"] == true);

  // closed CPnTorus solution, Hopf-lifted into C^3
  REQUIRE(run("lift --hopf --closed --case cpn-torus --n 2 --c 0.3 --K 0.5 --a 0.6 --orbit-resolution 8 "
              "--curve-resolution 48 --fiber-resolution 6 --format ply --out lh") == 0);
  CHECK(json_at("lh/cloud.json")["target"] == "flat");
  CHECK(json_at("lh/cloud.json")["p"] == 1);
  CHECK(fs::exists(scratch() / "lh/cloud.ply"));
  CHECK(run("verify --cloud lh/cloud.csv --out lh") == 0);
  CHECK(json_at("lh/verify.json")["max_omega"].get<double>() < 1e-9);

  // identical runs give identical bytes
  REQUIRE(run("lift --constant --case cn-so --n 2 --K 3 --orbit-resolution 8 --curve-resolution 32 --out lc2") == 0);
  CHECK(slurp(scratch() / "lc/cloud.csv") == slurp(scratch() / "lc2/cloud.csv"));
  CHECK(run("verify --cloud lc2/cloud.csv --out lc2") == 0);
  CHECK(slurp(scratch() / "lc/verify.json") == slurp(scratch() / "lc2/verify.json"));

  CHECK(run("lift --case cn-so --n 2 --K 2 --a 1 --out lf") == 3);
  CHECK(run("lift --hopf --case cn-so --n 2 --K 1 --a 1 --span 1 --out lf") == 2);
  CHECK(run("verify --cloud missing/cloud.csv") == 2);
}

TEST_CASE("verify rejects a perturbed cloud") {
  REQUIRE(run("lift --case cpn-so --n 2 --K 0.05 --a 0.7 --span 3 --orbit-resolution 8 --curve-resolution 24 --out lp") == 0);
  CHECK(run("verify --cloud lp/cloud.csv --out lp") == 0);
  fs::create_directories(scratch() / "pp");
  fs::copy_file(scratch() / "lp/cloud.json", scratch() / "pp/cloud.json", fs::copy_options::overwrite_existing);
  std::istringstream in(slurp(scratch() / "lp/cloud.csv"));
  std::ofstream out(scratch() / "pp/cloud.csv", std::ios::binary);
  std::string line;
  for (int i = 0; std::getline(in, line); ++i) {
    if (i == 50) {
      // shift the first point coordinate re_0 by 1e-3
      std::vector<std::string> cols;
      std::stringstream ss(line);
      for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", std::stod(cols[2]) + 1e-3);
      cols[2] = buf;
      line.clear();
      for (std::size_t k = 0; k < cols.size(); ++k) line += (k ? "," : "") + cols[k];
    }
    out << line << "\n";
  }
  out.close();
  CHECK(run("verify --cloud pp/cloud.csv --out pp") == 4);
  CHECK(json_at("pp/verify.json")["passed"] == false);
}

TEST_CASE("export") {
  REQUIRE(run("lift --constant --case cn-so --n 2 --K 3 --orbit-resolution 4 --curve-resolution 8 --out le") == 0);
  CHECK(run("export --cloud le/cloud.csv --format obj") == 0);
  const std::string obj = slurp(scratch() / "le/cloud.obj");
  CHECK(std::count(obj.begin(), obj.end(), '\n') == 4 * 4 * 8);
  CHECK(run("export --cloud le/cloud.csv --format ply --output le/x.ply") == 0);
  CHECK(slurp(scratch() / "le/x.ply").rfind("ply\n", 0) == 0);
  CHECK(run("export --cloud le/cloud.csv --format stl") == 2);
  CHECK(run("export --cloud le/cloud.csv --format csv") == 2);
}
