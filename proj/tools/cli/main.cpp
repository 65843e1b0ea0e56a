#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <memory>

using namespace hmin;
using namespace hmin::cli;

namespace {

using Apply = std::function<void(RunConfig&)>;

template <class T>
void option(CLI::App* app, std::vector<Apply>& ap, const std::string& flag, T RunConfig::*field,
            const std::string& help) {
  auto store = std::make_shared<T>();
  CLI::Option* o = app->add_option(flag, *store, help);
  ap.push_back([o, store, field](RunConfig& c) {
    if (o->count() > 0) c.*field = *store;
  });
}

void flag(CLI::App* app, std::vector<Apply>& ap, const std::string& name, bool RunConfig::*field,
          const std::string& help) {
  CLI::Option* o = app->add_flag(name, help);
  ap.push_back([o, field](RunConfig& c) {
    if (o->count() > 0) c.*field = true;
  });
}

struct Sub {
  CLI::App* app = nullptr;
  std::vector<Apply> apply;
  std::string config;
  std::function<int(const RunConfig&)> run;
};

void add_case(Sub& s) {
  option(s.app, s.apply, "--case", &RunConfig::case_name, "cpn-so | cpn-torus | cn-so | cn-torus");
  option(s.app, s.apply, "--n", &RunConfig::n, "dimension parameter n");
  option(s.app, s.apply, "--c", &RunConfig::c, "moment level constants (torus cases)");
  option(s.app, s.apply, "--K", &RunConfig::K, "constant K");
  option(s.app, s.apply, "--tol", &RunConfig::tol, "integrator tolerance in [1e-14, 1e-4]");
  option(s.app, s.apply, "--jobs", &RunConfig::jobs, "worker threads");
  option(s.app, s.apply, "--out", &RunConfig::out, "output directory");
  option(s.app, s.apply, "--output", &RunConfig::output, "explicit output file");
  s.app->add_option("--config", s.config, "JSON config file; flags override it");
}

void add_ic(Sub& s) {
  option(s.app, s.apply, "--a", &RunConfig::a, "initial height");
  option(s.app, s.apply, "--b", &RunConfig::b, "initial slope");
  option(s.app, s.apply, "--span", &RunConfig::span, "theta span");
  option(s.app, s.apply, "--q-max", &RunConfig::q_max, "largest denominator");
}

void add_grid(Sub& s) {
  option(s.app, s.apply, "--a-min", &RunConfig::a_min, "lower end of the a-grid");
  option(s.app, s.apply, "--a-max", &RunConfig::a_max, "upper end of the a-grid");
  option(s.app, s.apply, "--count", &RunConfig::count, "grid points");
  option(s.app, s.apply, "--q-max", &RunConfig::q_max, "largest denominator");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-minimal Lagrangian cohomogeneity-one solver"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Sub>> subs;
  auto make = [&](const char* name, const char* help, std::function<int(const RunConfig&)> run) -> Sub& {
    subs.push_back(std::make_unique<Sub>());
    Sub& s = *subs.back();
    s.app = app.add_subcommand(name, help);
    s.run = std::move(run);
    return s;
  };

  Sub& solve = make("solve", "integrate one trajectory and classify it", cmd_solve);
  add_case(solve);
  add_ic(solve);

  Sub& scn = make("scan", "half period Omega_a over an a-grid", cmd_scan);
  add_case(scn);
  add_grid(scn);

  Sub& closed = make("closed", "closed-solution search over an a-grid", cmd_closed);
  add_case(closed);
  add_grid(closed);

  Sub& lift = make("lift", "sweep a solution into an ambient point cloud", cmd_lift);
  add_case(lift);
  add_ic(lift);
  flag(lift.app, lift.apply, "--constant", &RunConfig::constant, "use the constant solution");
  flag(lift.app, lift.apply, "--hopf", &RunConfig::hopf, "Hopf-lift the cloud into C^{n+1}");
  flag(lift.app, lift.apply, "--closed", &RunConfig::closed, "span one closing period 2 pi p");
  option(lift.app, lift.apply, "--format", &RunConfig::format, "extra export format: csv | obj | ply");
  option(lift.app, lift.apply, "--orbit-resolution", &RunConfig::orbit_resolution, "samples per orbit angle");
  option(lift.app, lift.apply, "--curve-resolution", &RunConfig::curve_resolution, "samples along the curve");
  option(lift.app, lift.apply, "--fiber-resolution", &RunConfig::fiber_resolution, "samples along the Hopf fiber");

  Sub& verify = make("verify", "check a cloud and its source curve", cmd_verify);
  add_case(verify);
  option(verify.app, verify.apply, "--cloud", &RunConfig::cloud, "cloud CSV");
  flag(verify.app, verify.apply, "--hopf", &RunConfig::hopf, "cloud is Hopf-lifted (no sidecar)");

  Sub& exp = make("export", "convert a cloud CSV to OBJ or PLY", cmd_export);
  add_case(exp);
  option(exp.app, exp.apply, "--cloud", &RunConfig::cloud, "cloud CSV");
  option(exp.app, exp.apply, "--format", &RunConfig::format, "csv | obj | ply");
  flag(exp.app, exp.apply, "--hopf", &RunConfig::hopf, "cloud is Hopf-lifted (no sidecar)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  for (const auto& s : subs) {
    if (!s->app->parsed()) continue;
    try {
      RunConfig cfg;
      if (!s->config.empty()) cfg = load_config(s->config, cfg);
      for (const Apply& f : s->apply) f(cfg);
      return s->run(cfg);
    } catch (const NumericalError& e) {
      std::fprintf(stderr, "numerical failure: %s\n", e.what());
      return kNumerical;
    } catch (const Error& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kConfig;
    }
  }
  return kConfig;
}
