#include "commands.hpp"

#include "hmin/lift.hpp"
#include "hmin/solver.hpp"
#include "hmin/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace hmin::cli {

namespace fs = std::filesystem;

namespace {

const double kPi = std::acos(-1.0);

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  if (!cfg.output.empty()) return cfg.output;
  return (fs::path(cfg.out) / name).string();
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) fs::create_directories(parent, ec);
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string sibling(const std::string& path, const std::string& ext) {
  fs::path p(path);
  p.replace_extension(ext);
  return p.string();
}

// nullopt when admissible, otherwise the reason.
std::optional<std::string> forbidden(const ReducedProblem& p) {
  const Admissibility adm = p.admissibility();
  if (adm.admissible) return std::nullopt;
  return adm.reason;
}

int report_forbidden(const std::string& reason) {
  std::fprintf(stderr, "forbidden lambda: %s\n", reason.c_str());
  return kForbidden;
}

IntegrateOptions integrate_options(const RunConfig& cfg, double span, bool classify) {
  IntegrateOptions o;
  o.theta1 = span;
  o.rtol = cfg.tol;
  o.atol = 1e-2 * cfg.tol;
  o.classify = classify;
  o.q_max = cfg.q_max;
  return o;
}

nlohmann::ordered_json case_json(const ActionCase& ac) {
  nlohmann::ordered_json j;
  j["case"] = std::string(to_string(ac.variant()));
  j["n"] = ac.n();
  j["c"] = ac.c();
  return j;
}

std::string csv_status(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "a,lambda,omega,omega_over_pi,p,q,closure_residual,status\n";
  for (const ScanRow& r : rows) {
    const bool ok = r.status == "ok";
    out += fmt17(r.a) + "," + fmt17(r.lambda) + "," + fmt17(r.omega) + "," + fmt17(r.ratio) + "," +
           (ok ? std::to_string(r.pq.p) : "") + "," + (ok ? std::to_string(r.pq.q) : "") + "," +
           fmt17(r.closure_residual) + "," + csv_status(r.status) + "\n";
  }
  return out;
}

struct Source {
  ActionCase ac;
  SpaceKind target;
  nlohmann::json meta;  // empty without a sidecar
};

Source load_source(const RunConfig& cfg) {
  const std::string side = sidecar_path(cfg.cloud);
  if (fs::exists(side)) {
    std::ifstream in(side);
    nlohmann::json j;
    try {
      in >> j;
      const ActionCase ac =
          ActionCase::make(parse_case_variant(j.at("case").get<std::string>()), j.at("n").get<int>(),
                           j.at("c").get<std::vector<double>>());
      const SpaceKind t = j.at("target").get<std::string>() == "projective" ? SpaceKind::ProjectiveHomogeneous
                                                                            : SpaceKind::FlatComplex;
      return {ac, t, j};
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("bad cloud sidecar '" + side + "': " + e.what());
    }
  }
  validate(cfg, Needs::Case);
  const ActionCase ac = make_case(cfg);
  const SpaceKind t = ac.projective() && !cfg.hopf ? SpaceKind::ProjectiveHomogeneous : SpaceKind::FlatComplex;
  return {ac, t, nlohmann::json()};
}

RVector level_of(const ActionCase& ac) {
  switch (ac.variant()) {
    case CaseVariant::CPnTorus:
    case CaseVariant::CnTorus:
      return Eigen::Map<const RVector>(ac.c().data(), static_cast<Eigen::Index>(ac.c().size()));
    default: {
      const int m = ac.variant() == CaseVariant::CPnSO ? ac.n() : ac.n() + 1;
      return RVector::Zero(m * (m - 1) / 2);
    }
  }
}

// Cloud-only checks. Points are read as flat vectors so that malformed
// geometry shows up as a failed check rather than a parse error.
void cloud_checks(const ImmersionCloud& cloud, const ActionCase& ac, SpaceKind target, VerificationReport& rep) {
  rep.max_omega = lagrangian_residual(cloud);
  rep.add_check("max_omega", rep.max_omega, 1e-9);
  double min_gram = INFINITY, moment = 0.0, unit = 0.0, horiz = 0.0;
  const RVector level = level_of(ac);
  const bool proj_points = ac.projective();
  for (const CloudSample& s : cloud.samples) {
    min_gram = std::min(min_gram, gram_determinant(s.frame));
    const double nz = s.point.z.norm();
    AmbientPoint p = s.point;
    if (proj_points) {
      p.kind = SpaceKind::ProjectiveHomogeneous;
      p.z = s.point.z / nz;
    }
    const RVector mu = moment_map(ac, p);
    const double scale = proj_points ? 1.0 : std::max(1.0, nz * nz);
    moment = std::max(moment, (mu - level).cwiseAbs().maxCoeff() / scale);
    if (target == SpaceKind::ProjectiveHomogeneous) {
      unit = std::max(unit, std::abs(nz - 1.0));
      for (const CVector& e : s.frame) horiz = std::max(horiz, std::abs(p.z.dot(e)) / std::max(e.norm(), 1e-300));
    }
  }
  rep.add_check("min_gram_determinant", min_gram, 1e-10, true);
  rep.add_check("moment_level", moment, 1e-9);
  if (target == SpaceKind::ProjectiveHomogeneous) {
    rep.add_check("unit_representatives", unit, 1e-12);
    rep.add_check("hopf_horizontal", horiz, 1e-10);
  }
}

// The finite-difference operator works in flat space, so CP^n immersions
// are certified through their Hopf lift.
void delta_alpha_check(const Immersion& source, VerificationReport& rep) {
  const Immersion imm = source.target == SpaceKind::ProjectiveHomogeneous ? hopf_lift(source) : source;
  std::vector<int> counts(imm.dim, 2);
  counts[0] = 8;
  try {
    // Outer step 1e-2: integrated curves are only piecewise smooth across
    // dense-output nodes, which a finer divergence stencil resolves as noise.
    const DeltaAlpha da = delta_alpha_H_fd(imm.map, interior_grid(imm, counts, 0.05), 1e-2, 1e-3);
    rep.delta_alpha_H = da.max_abs;
    rep.delta_alpha_error = da.error_bar;
    rep.max_mean_curvature = da.max_mean_curvature;
    rep.add_check("delta_alpha_H", da.max_abs + da.error_bar, 1e-3);
  } catch (const Error& e) {
    std::fprintf(stderr, "delta alpha_H: %s\n", e.what());
    rep.add_check("delta_alpha_H", NAN, 1e-3);
  }
}

void quotient_checks(const MetricProfile& prof, const PlaneCurve& pc, double lo, double hi, double K,
                     VerificationReport& rep) {
  try {
    const QuotientSeries qs = quotient_series(prof, pc, lo, hi, 40);
    rep.quotient_residual = qs.residual(K);
    rep.quotient_stdev_rel = qs.stdev / std::abs(K);
  } catch (const Error& e) {
    std::fprintf(stderr, "quotient curvature: %s\n", e.what());
  }
  rep.add_check("quotient_residual_rel", rep.quotient_residual / std::abs(K), 1e-4);
  rep.add_check("quotient_stdev_rel", rep.quotient_stdev_rel, 1e-4);
  try {
    rep.beta_residual = beta_residual(prof, pc, lo, hi, 20);
  } catch (const Error& e) {
    std::fprintf(stderr, "beta residual: %s\n", e.what());
  }
  rep.add_check("beta_residual", rep.beta_residual.value_or(NAN), 1e-3);
}

// Every sample must sit on the rebuilt immersion at its own parameters.
void match_check(const ImmersionCloud& cloud, const Immersion& imm, VerificationReport& rep) {
  double worst = 0.0;
  for (const CloudSample& s : cloud.samples) {
    if (s.params.size() != imm.dim) {
      worst = INFINITY;
      break;
    }
    const CVector z = imm.map(s.params);
    worst = std::max(worst, (z - s.point.z).norm() / std::max(1.0, z.norm()));
    const std::vector<CVector> fr = imm.frame(s.params);
    if (fr.size() != s.frame.size()) {
      worst = INFINITY;
      break;
    }
    for (std::size_t f = 0; f < fr.size(); ++f)
      worst = std::max(worst, (fr[f] - s.frame[f]).norm() / std::max(1.0, fr[f].norm()));
  }
  rep.add_check("source_match", worst, 1e-9);
}

// Rebuilds the curve named by the sidecar and certifies it.
void source_checks(const Source& src, const RunConfig& cfg, const ImmersionCloud& cloud, VerificationReport& rep) {
  const nlohmann::json& m = src.meta;
  const double K = m.at("K").get<double>();
  const bool hopf = m.value("hopf", false);
  MetricProfile prof(src.ac);
  if (m.at("source").get<std::string>() == "constant") {
    const double x = constant_height(src.ac, K);
    PlaneCurve pc = [x](double s) { return std::array<double, 2>{x, s}; };
    quotient_checks(prof, pc, 0.1, 2.0 * kPi - 0.1, K, rep);
    const Immersion base = constant_immersion_map(src.ac, K);
    const Immersion imm = hopf ? hopf_lift(base) : base;
    match_check(cloud, imm, rep);
    delta_alpha_check(imm, rep);
    return;
  }
  RunConfig rc = cfg;
  rc.tol = m.at("tol").get<double>();
  const InitialCondition ic{m.at("a").get<double>(), m.at("b").get<double>()};
  const ReducedProblem p = ReducedProblem(src.ac, K).with_initial(ic);
  const Trajectory tr = integrate(p, ic, integrate_options(rc, m.at("span").get<double>(), false));
  rep.first_integral_drift = tr.drift_max;
  rep.add_check("first_integral_drift", tr.drift_max, tr.drift_budget);
  auto smp = tr.sampler;
  PlaneCurve pc = [smp](double s) { return std::array<double, 2>{smp(s)[0], s}; };
  quotient_checks(prof, pc, tr.theta_begin() + 0.05, tr.theta_end() - 0.05, K, rep);
  const Immersion base = orbit_immersion(tr);
  const Immersion imm = hopf ? hopf_lift(base) : base;
  match_check(cloud, imm, rep);
  delta_alpha_check(imm, rep);
}

std::string target_name(SpaceKind t) { return t == SpaceKind::ProjectiveHomogeneous ? "projective" : "flat"; }

}  // namespace

std::string sidecar_path(const std::string& cloud_path) { return sibling(cloud_path, ".json"); }

int cmd_solve(const RunConfig& cfg) {
  validate(cfg, Needs::Solve);
  const ActionCase ac = make_case(cfg);
  const InitialCondition ic{cfg.a, cfg.b};
  const ReducedProblem p = ReducedProblem(ac, cfg.K).with_initial(ic);
  if (auto why = forbidden(p)) return report_forbidden(*why);
  const Trajectory tr = integrate(p, ic, integrate_options(cfg, cfg.span, true));

  std::string csv = "theta,x,xp,drift\n";
  for (std::size_t i = 0; i < tr.theta.size(); ++i)
    csv += fmt17(tr.theta[i]) + "," + fmt17(tr.x[i]) + "," + fmt17(tr.xp[i]) + "," + fmt17(tr.drift[i]) + "\n";
  const std::string csv_path = out_path(cfg, "trajectory.csv");
  write_text(csv_path, csv);

  const Classification& cl = tr.classification;
  nlohmann::ordered_json j = case_json(ac);
  j["K"] = cfg.K;
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["span"] = cfg.span;
  j["tol"] = cfg.tol;
  j["lambda"] = tr.lambda;
  j["classification"] = describe(cl);
  j["kind"] = std::string(to_string(cl.kind));
  if (cl.kind == Classification::Kind::Closed) {
    j["p"] = cl.pq.p;
    j["q"] = cl.pq.q;
  }
  j["omega"] = num(cl.omega);
  j["theta_max"] = num(cl.theta_max);
  j["stop"] = std::string(to_string(tr.stop));
  j["drift_max"] = tr.drift_max;
  j["drift_budget"] = tr.drift_budget;
  j["boundary_measure"] = tr.boundary_measure;
  j["samples"] = tr.theta.size();
  write_text(sibling(csv_path, ".json"), j.dump(2) + "\n");
  std::printf("lambda = %s\nclassification: %s\nstop: %s\ndrift_max = %s (budget %s)\n", fmt17(tr.lambda).c_str(),
              describe(cl).c_str(), std::string(to_string(tr.stop)).c_str(), fmt17(tr.drift_max).c_str(),
              fmt17(tr.drift_budget).c_str());
  return kOk;
}

int cmd_scan(const RunConfig& cfg) {
  validate(cfg, Needs::Scan);
  const ReducedProblem p(make_case(cfg), cfg.K);
  const std::vector<ScanRow> rows = scan(p, linspace(cfg.a_min, cfg.a_max, cfg.count), cfg.q_max, cfg.jobs);
  const std::string path = out_path(cfg, "scan.csv");
  write_text(path, scan_csv(rows));
  const auto ok = std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return r.status == "ok"; });
  std::printf("%zu grid points, %ld ok, written to %s\n", rows.size(), static_cast<long>(ok), path.c_str());
  return kOk;
}

int cmd_closed(const RunConfig& cfg) {
  validate(cfg, Needs::Scan);
  const ReducedProblem p(make_case(cfg), cfg.K);
  ClosedSearchOptions opt;
  opt.a_min = cfg.a_min;
  opt.a_max = cfg.a_max;
  opt.count = cfg.count;
  opt.q_max = cfg.q_max;
  opt.jobs = cfg.jobs;
  const ClosedSearchResult res = closed_search(p, opt);

  std::string csv = "a,lambda,omega,omega_over_pi,p,q,closure_residual\n";
  for (const ClosedHit& h : res.hits)
    csv += fmt17(h.a) + "," + fmt17(h.lambda) + "," + fmt17(h.omega) + "," + fmt17(h.omega / kPi) + "," +
           std::to_string(h.pq.p) + "," + std::to_string(h.pq.q) + "," + fmt17(h.closure_residual) + "\n";
  const std::string path = out_path(cfg, "closed.csv");
  write_text(path, csv);

  nlohmann::ordered_json j = case_json(p.action_case());
  j["K"] = cfg.K;
  j["grid"] = res.grid.size();
  j["ratio_min"] = num(res.ratio_min);
  j["ratio_max"] = num(res.ratio_max);
  j["hits"] = res.hits.size();
  write_text(sibling(path, ".json"), j.dump(2) + "\n");
  if (res.hits.empty())
    std::printf("no (p, q) hit with q <= %lld; observed Omega/pi range [%s, %s]\n", static_cast<long long>(cfg.q_max),
                fmt17(res.ratio_min).c_str(), fmt17(res.ratio_max).c_str());
  else
    std::printf("%zu hits, Omega/pi range [%s, %s], written to %s\n", res.hits.size(), fmt17(res.ratio_min).c_str(),
                fmt17(res.ratio_max).c_str(), path.c_str());
  return kOk;
}

int cmd_lift(const RunConfig& cfg) {
  validate(cfg, Needs::Lift);
  const CloudFormat extra = parse_cloud_format(cfg.format);
  const ActionCase ac = make_case(cfg);
  nlohmann::ordered_json side = case_json(ac);
  side["K"] = cfg.K;
  std::optional<ImmersionCloud> cloud;
  if (cfg.constant) {
    cloud = constant_immersion(ac, cfg.K, cfg.orbit_resolution, cfg.curve_resolution);
    side["source"] = "constant";
    side["x"] = constant_height(ac, cfg.K);
  } else {
    const InitialCondition ic{cfg.a, cfg.b};
    const ReducedProblem p = ReducedProblem(ac, cfg.K).with_initial(ic);
    if (auto why = forbidden(p)) return report_forbidden(*why);
    double span = cfg.span;
    side["source"] = "trajectory";
    side["a"] = cfg.a;
    side["b"] = cfg.b;
    if (cfg.closed) {
      const double om = period_omega(p, cfg.a);
      const Rational pq = best_rational(om / kPi, cfg.q_max);
      span = 2.0 * kPi * double(pq.p);
      side["p"] = pq.p;
      side["q"] = pq.q;
      side["closure_residual"] = num(closure_residual(p, cfg.a, pq, cfg.tol));
      std::printf("Omega/pi = %s, p/q = %lld/%lld\n", fmt17(om / kPi).c_str(), static_cast<long long>(pq.p),
                  static_cast<long long>(pq.q));
    }
    side["span"] = span;
    side["tol"] = cfg.tol;
    const Trajectory tr = integrate(p, ic, integrate_options(cfg, span, false));
    cloud = sweep_orbit(tr, cfg.orbit_resolution, cfg.curve_resolution, cfg.jobs);
  }
  if (cfg.hopf) cloud = hopf_lift_cloud(*cloud, cfg.fiber_resolution);
  side["hopf"] = cfg.hopf;
  side["target"] = target_name(cloud->target);
  side["orbit_resolution"] = cfg.orbit_resolution;
  side["curve_resolution"] = cfg.curve_resolution;
  if (cfg.hopf) side["fiber_resolution"] = cfg.fiber_resolution;
  side["samples"] = cloud->size();
  side["dim"] = cloud->dim();

  const std::string path = out_path(cfg, "cloud.csv");
  ensure_parent(path);
  export_cloud(*cloud, CloudFormat::Csv, path);
  if (extra != CloudFormat::Csv) export_cloud(*cloud, extra, sibling(path, "." + cfg.format));
  write_text(sidecar_path(path), side.dump(2) + "\n");
  std::printf("%zu samples of dimension %d written to %s\n", cloud->size(), cloud->dim(), path.c_str());
  return kOk;
}

int cmd_verify(const RunConfig& cfg) {
  validate(cfg, Needs::Cloud);
  const Source src = load_source(cfg);
  const ImmersionCloud cloud = import_cloud_csv(cfg.cloud, src.ac, SpaceKind::FlatComplex);
  VerificationReport rep;
  cloud_checks(cloud, src.ac, src.target, rep);
  if (!src.meta.is_null()) source_checks(src, cfg, cloud, rep);
  const std::string path = out_path(cfg, "verify.json");
  write_text(path, rep.to_json());
  for (const Check& c : rep.checks)
    std::printf("%s %s = %s %s %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), fmt17(c.value).c_str(),
                c.lower_bound ? ">=" : "<=", fmt17(c.tolerance).c_str());
  return rep.all_passed() ? kOk : kVerifyFailed;
}

int cmd_export(const RunConfig& cfg) {
  validate(cfg, Needs::Cloud);
  const CloudFormat f = parse_cloud_format(cfg.format);
  const Source src = load_source(cfg);
  const ImmersionCloud cloud = import_cloud_csv(cfg.cloud, src.ac, SpaceKind::FlatComplex);
  std::string path = cfg.output.empty() ? sibling(cfg.cloud, "." + cfg.format) : cfg.output;
  if (path == cfg.cloud) throw ConfigError("export would overwrite its input");
  ensure_parent(path);
  export_cloud(cloud, f, path);
  std::printf("%zu points written to %s\n", cloud.size(), path.c_str());
  return kOk;
}

}  // namespace hmin::cli
