#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hmin/errors.hpp"
#include "hmin/lift.hpp"
#include "hmin/verify.hpp"

#include <json.hpp>

#include <cmath>

using namespace hmin;

namespace {
const double kPi = std::acos(-1.0);

CVector real_vec(std::initializer_list<double> v) {
  CVector z(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) z(i++) = x;
  return z;
}

ImmersionMap sphere(double rho) {
  return [rho](const RVector& u) {
    return CVector(rho * real_vec({std::cos(u(0)), std::sin(u(0)) * std::cos(u(1)), std::sin(u(0)) * std::sin(u(1))}));
  };
}

RVector pt(double a, double b) {
  RVector u(2);
  u << a, b;
  return u;
}

Trajectory run(const ActionCase& ac, double K, double a, double span) {
  IntegrateOptions o;
  o.theta1 = span;
  o.classify = false;
  return integrate(ReducedProblem(ac, K), {a, 0.0}, o);
}

PlaneCurve plane_curve(const Trajectory& tr) {
  auto smp = tr.sampler;
  return [smp](double s) { return std::array<double, 2>{smp(s)[0], s}; };
}
}  // namespace

TEST_CASE("sphere mean curvature") {
  for (double rho : {0.5, 1.0, 3.0}) {
    const ImmersionMap F = sphere(rho);
    for (const RVector& u : {pt(0.7, 0.2), pt(1.3, 2.0), pt(2.2, 4.0)}) {
      const double H = mean_curvature_fd(F, u, 1e-4).norm();
      CHECK(std::abs(H - 2.0 / rho) < 1e-5 * (2.0 / rho));
      // second order: halving h cuts the error about 4x
      const double e1 = std::abs(mean_curvature_fd(F, u, 1e-2).norm() - 2.0 / rho);
      const double e2 = std::abs(mean_curvature_fd(F, u, 5e-3).norm() - 2.0 / rho);
      CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
      const MeanCurvature r = mean_curvature_richardson(F, u, 1e-2);
      CHECK(std::abs(r.H.norm() - 2.0 / rho) < 1e-6 * (2.0 / rho));
      // H points inward
      CHECK(r.H.real().dot(F(u).real()) < 0.0);
    }
  }
  CHECK_THROWS_AS(mean_curvature_fd(sphere(1.0), pt(0.7, 0.2), 0.0), InvalidInput);
  // psi_1 = 0 collapses the second direction
  CHECK_THROWS_AS(mean_curvature_fd(sphere(1.0), pt(0.0, 0.2), 1e-4), DegenerateParamError);
}

TEST_CASE("Lagrangian planes are minimal") {
  const Complex rot = std::polar(1.0, kPi / 6);
  ImmersionMap plane = [rot](const RVector& u) {
    CVector z(2);
    z << rot * u(0), Complex(0, 1) * u(1);
    return z;
  };
  CHECK(mean_curvature_fd(plane, pt(0.3, -1.1)).norm() < 1e-8);
  const DeltaAlpha da = delta_alpha_H_fd(plane, {pt(0.3, -1.1), pt(1.0, 2.0)});
  CHECK(da.max_abs < 1e-6);
  CHECK(da.max_mean_curvature < 1e-8);
  CHECK(da.points == 2);
}

TEST_CASE("constant immersion is H-minimal but not minimal") {
  const Immersion imm = constant_immersion_map(ActionCase::cn_so(2), 3.0);
  const DeltaAlpha da = delta_alpha_H_fd(imm.map, interior_grid(imm, {4, 2, 3}));
  CHECK(da.max_abs + da.error_bar < 1e-3);
  CHECK(da.min_mean_curvature > 1.0);
  CHECK(da.points == 24);
}

TEST_CASE("complex lines are detected") {
  ImmersionCloud cloud(ActionCase::cn_so(1 + 1), SpaceKind::FlatComplex);
  CloudSample s;
  s.params = RVector::Zero(2);
  s.point = AmbientPoint::flat(real_vec({1.0, 0.0, 0.0}));
  const CVector e = real_vec({0.0, 1.0, 0.0});
  s.frame = {e, Complex(0, 1) * e};
  cloud.samples.push_back(s);
  CHECK(lagrangian_residual(cloud) == doctest::Approx(1.0).epsilon(1e-15));

  ImmersionMap line = [](const RVector& u) {
    CVector z(2);
    z << Complex(u(0), u(1)), 0.0;
    return z;
  };
  CHECK_THROWS_AS(delta_alpha_H_fd(line, {pt(0.2, 0.3)}), PreconditionError);
}

TEST_CASE("geodesics of the HL metric have zero curvature") {
  for (int n : {2, 4}) {
    MetricProfile prof(ActionCase::cpn_so(n));
    PlaneCurve g = [](double s) { return std::array<double, 2>{s, 1.1}; };
    for (double s : {0.2, 0.8, 1.3}) CHECK(std::abs(quotient_curvature(prof, g, s).k) < 1e-6);
    CHECK(beta_residual(prof, g, 0.3, 1.2, 6) < 1e-6);
  }
  const ActionCase act = ActionCase::cn_torus(3, {0.5, 0.1, 0.2});
  MetricProfile ct(act);
  PlaneCurve line = [act](double s) { return std::array<double, 2>{radius_from_flat(act, std::hypot(s, 1.2)), std::atan2(1.2, s)}; };
  for (double s : {-2.0, 0.0, 1.5}) CHECK(std::abs(quotient_curvature(ct, line, s).k) < 1e-6);
  CHECK_THROWS_AS(quotient_curvature(ct, line, 0.0, -1.0), InvalidInput);
}

TEST_CASE("Euler-Lagrange trajectories have V^2 k = K") {
  struct C {
    ActionCase ac;
    double K, a;
  };
  for (const C& c : {C{ActionCase::cpn_so(2), 0.05, 0.7}, C{ActionCase::cpn_so(3), -0.05, 0.9},
                     C{ActionCase::cpn_torus(2, {0.3}), 0.5, 0.6}, C{ActionCase::cpn_torus(3, {0.3, 0.2}), -1.0, 0.7},
                     C{ActionCase::cn_so(2), 1.0, 1.0}, C{ActionCase::cn_so(3), 2.0, 0.9},
                     C{ActionCase::cn_torus(2, {0.3, -0.2}), 1.0, 1.0}, C{ActionCase::cn_torus(2, {0.5, 0.4}), -1.0, 1.2},
                     C{ActionCase::cpn_so(2), -0.1, kPi / 4}, C{ActionCase::cn_so(2), 1.0, 2.0}}) {
    CAPTURE(to_string(c.ac.variant()));
    CAPTURE(c.a);
    const Trajectory tr = run(c.ac, c.K, c.a, 1.5);
    const PlaneCurve pc = plane_curve(tr);
    const double lo = tr.theta_begin() + 0.05, hi = tr.theta_end() - 0.05;
    const QuotientSeries qs = quotient_series(tr.problem.profile(), pc, lo, hi, 12);
    CHECK(qs.residual(c.K) < 1e-4 * std::abs(c.K));
    CHECK(qs.stdev < 1e-4 * std::abs(c.K));
    CHECK(beta_residual(tr.problem.profile(), pc, lo, hi, 6) < 1e-3);
  }
}

TEST_CASE("perturbed curves fail the quotient checks") {
  ReducedProblem p(ActionCase::cpn_so(2), 0.05);
  const double c = p.constant_solutions()[0];
  PlaneCurve bent = [c](double s) { return std::array<double, 2>{c + 0.1 * std::sin(s), s}; };
  double worst = 0.0;
  try {
    worst = beta_residual(p.profile(), bent, 0.5, 5.5, 10);
  } catch (const StepError&) {
    worst = INFINITY;
  }
  CHECK(worst > 1e-2);
  CHECK(quotient_series(p.profile(), bent, 0.5, 5.5, 10).residual(0.05) > 1e-2);
}

TEST_CASE("delta alpha detects a non-solution") {
  MetricProfile prof(ActionCase::cn_so(2));
  CurveMap wavy = [](double s) { return CurvePoint{1.0 + 0.2 * std::sin(s), s, 0.2 * std::cos(s), 1.0}; };
  const Immersion imm = orbit_immersion(prof, wavy, 0.0, 2.0 * kPi);
  double value = 0.0;
  try {
    const DeltaAlpha da = delta_alpha_H_fd(imm.map, interior_grid(imm, {6, 2, 2}, 0.1));
    value = da.max_abs;
  } catch (const StepError&) {
    value = INFINITY;
  }
  CHECK(value > 1e-2);
}

TEST_CASE("interior grid") {
  const Immersion imm = constant_immersion_map(ActionCase::cn_so(2), 3.0);
  const auto g = interior_grid(imm, {2, 3, 4});
  CHECK(g.size() == 24);
  CHECK(g.front()(0) == doctest::Approx(imm.lo(0) + 0.25 * (imm.hi(0) - imm.lo(0))));
  CHECK_THROWS_AS(interior_grid(imm, {2, 3}), InvalidInput);
  CHECK_THROWS_AS(interior_grid(imm, {2, 0, 3}), InvalidInput);
}

TEST_CASE("verification report") {
  VerificationReport r;
  CHECK(r.all_passed());
  CHECK(r.add_check("omega", 1e-10, 1e-10).passed);
  CHECK_FALSE(r.add_check("omega2", std::nextafter(1e-10, 1.0), 1e-10).passed);
  CHECK(r.add_check("mean curvature", 0.1, 0.1, true).passed);
  CHECK_FALSE(r.add_check("nan", NAN, 1.0).passed);
  CHECK_FALSE(r.all_passed());
  r.max_omega = 2e-12;
  r.delta_alpha_H = 3e-5;
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("max_omega").get<double>() == 2e-12);
  CHECK(j.at("delta_alpha_H").get<double>() == 3e-5);
  CHECK(j.at("quotient_residual").is_null());
  CHECK(j.at("beta_residual").is_null());
  CHECK(j.at("passed") == false);
  REQUIRE(j.at("checks").size() == 4);
  CHECK(j["checks"][0]["name"] == "omega");
  CHECK(j["checks"][0]["bound"] == "<=");
  CHECK(j["checks"][2]["bound"] == ">=");
  CHECK(j["checks"][3]["value"].is_null());
  CHECK(j["checks"][0]["passed"] == true);
  CHECK(r.to_json() == r.to_json());
}
