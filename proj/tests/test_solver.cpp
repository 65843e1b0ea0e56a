#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hmin/errors.hpp"
#include "hmin/solver.hpp"

#include <cmath>

using namespace hmin;

namespace {
const double kPi = std::acos(-1.0);

// Independent partner root: walk the radicand from a in direction dir and bisect.
double bisect_partner(const ReducedProblem& p, double a, int dir) {
  auto f = [&](double x) { return p.radicand(x); };
  double prev = a + dir * 1e-5;
  for (int k = 1; k <= 200000; ++k) {
    const double x = a + dir * 1e-5 * k;
    if (!p.profile().in_domain(x)) break;
    if (f(x) < 0.0) {
      double lo = prev, hi = x;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = x;
  }
  return NAN;
}
}  // namespace

TEST_CASE("constant trajectory") {
  ReducedProblem p(ActionCase::cn_so(2), 3.0);
  const Trajectory tr = integrate(p, {1.0, 0.0}, 10.0);
  CHECK(tr.classification.kind == Classification::Kind::Constant);
  for (double x : tr.x) CHECK(std::abs(x - 1.0) < 1e-14);
  CHECK(tr.drift_max == 0.0);
}

TEST_CASE("bounded regime run") {
  ReducedProblem p(ActionCase::cpn_so(2), -0.1);
  const Trajectory tr = integrate(p, {0.7853981634, 0.0}, 50.0);
  CHECK(tr.stop == StopReason::SpanEnd);
  CHECK(tr.theta_end() == doctest::Approx(50.0));
  CHECK((tr.classification.kind == Classification::Kind::Complete ||
         tr.classification.kind == Classification::Kind::Closed));
  CHECK(tr.boundary_measure > 0.01);
  CHECK(tr.drift_max <= tr.drift_budget);
  CHECK(tr.drift_budget == doctest::Approx(100.0 * 1e-10 * (1.0 + std::abs(tr.lambda))));
}

TEST_CASE("monotone escape run") {
  ReducedProblem p(ActionCase::cn_so(2), 1.0);
  const double a = 2.0;
  IntegrateOptions opt;
  opt.theta1 = 100.0;
  opt.escape_radius = 1e3 * a;
  const Trajectory tr = integrate(p, {a, 0.0}, opt);
  CHECK(tr.stop == StopReason::Escape);
  CHECK(tr.x.back() >= 1e3 * a);
  for (std::size_t k = 1; k < tr.x.size(); ++k) CHECK(tr.x[k] > tr.x[k - 1]);
  REQUIRE(tr.classification.kind == Classification::Kind::Blowup);
  CHECK(tr.theta_end() < tr.classification.theta_max);
  CHECK(tr.classification.theta_max == doctest::Approx(theta_max(p, a)).epsilon(1e-12));
}

TEST_CASE("integration preconditions") {
  ReducedProblem p(ActionCase::cn_so(2), 2.0);
  CHECK_THROWS_AS(integrate(p, {1.0, 0.0}, 10.0), PreconditionError);
  try {
    integrate(p, {1.0, 0.0}, 10.0);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("lambda = 0") != std::string::npos);
  }
  ReducedProblem q(ActionCase::cpn_so(2), 0.05);
  CHECK_THROWS_AS(integrate(q, {0.7, 0.0}, 10.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(integrate(q, {2.0, 0.0}, 10.0), DomainError);
}

TEST_CASE("integration is deterministic and backward runs mirror forward ones") {
  ReducedProblem p(ActionCase::cpn_so(3), 0.05);
  const Trajectory a = integrate(p, {1.0, 0.0}, 8.0);
  const Trajectory b = integrate(p, {1.0, 0.0}, 8.0);
  CHECK(a.theta == b.theta);
  CHECK(a.x == b.x);
  IntegrateOptions back;
  back.theta1 = -8.0;
  const Trajectory c = integrate(p, {1.0, 0.0}, back);
  CHECK(c.theta_begin() == doctest::Approx(-8.0));
  double worst = 0.0;
  for (double th = 0.0; th <= 8.0; th += 0.1) worst = std::max(worst, std::abs(c.at(-th)[0] - a.at(th)[0]));
  CHECK(worst < 1e-9);
}

TEST_CASE("first-integral drift is conserved and shrinks with the step") {
  ReducedProblem p(ActionCase::cn_torus(2, {0.3, -0.2}), 1.0);
  const Trajectory tr = integrate(p, {1.0, 0.1}, 10.0, 1e-10);
  CHECK(tr.drift_max < 1e-8 * (1.0 + std::abs(tr.lambda)));

  // Steps pinned by max_step: halving it must cut the drift by well over 4.
  ReducedProblem q(ActionCase::cpn_so(2), 0.05);
  auto drift = [&](double step) {
    IntegrateOptions o;
    o.theta1 = 10.0;
    o.rtol = 1e-2;
    o.atol = 1e-2;
    o.max_step = step;
    o.enforce_drift = false;
    o.classify = false;
    return integrate(q, {0.4, 0.0}, o).drift_max;
  };
  const double d1 = drift(0.4), d2 = drift(0.2);
  CAPTURE(d1);
  CAPTURE(d2);
  CHECK(d1 > 4.0 * d2);
}

TEST_CASE("radial slope matches the integrated slope") {
  ReducedProblem p(ActionCase::cpn_so(2), 0.05);
  const Trajectory tr = integrate(p, {1.2, 0.0}, 10.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < tr.x.size(); ++k) {
    if (std::abs(tr.xp[k]) < 1e-2) continue;
    const int branch = tr.xp[k] > 0 ? 1 : -1;
    worst = std::max(worst, std::abs(tr.xp[k] - tr.problem.radial_slope(tr.x[k], branch)));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("turning radius") {
  ReducedProblem p(ActionCase::cpn_so(2), 0.05);
  const double a = 1.2;  // above the constant solution: a maximum
  const double b = turning_radius(p, a);
  CHECK(b > 0.0);
  CHECK(b < a);
  const ReducedProblem pa = p.with_initial({a, 0.0});
  CHECK(std::abs(pa.radicand(b)) < 1e-12);
  CHECK(std::abs(b - bisect_partner(pa, a, -1)) < 1e-10);

  const double c = p.constant_solutions()[0];
  CHECK(turning_radius(p, c) == c);

  // lambda of (0.1, 0) lies in [0, -K/2] for K = -0.5
  ReducedProblem f(ActionCase::cpn_so(2), -0.5);
  REQUIRE_FALSE(f.with_initial({0.1, 0.0}).admissibility().admissible);
  CHECK_THROWS_AS(turning_radius(f, 0.1), BracketError);
}

TEST_CASE("period by quadrature") {
  ReducedProblem p(ActionCase::cpn_so(2), 0.05);
  for (double a : {0.3, 0.6, 1.2, 1.4}) {
    const double q = period_omega(p, a);
    CHECK(std::abs(q - shoot_half_period(p, a)) < 1e-6);
  }
  // small oscillations about the constant solution
  const double c = p.constant_solutions()[0];
  const double h = 1e-5;
  const double w2 = -(p.el_acceleration(c + h, 0.0) - p.el_acceleration(c - h, 0.0)) / (2 * h);
  REQUIRE(w2 > 0.0);
  const double lin = kPi / std::sqrt(w2);
  CHECK(std::abs(period_omega(p, c + 1e-3) - lin) < 1e-4 * lin);
  CHECK_THROWS_AS(period_omega(p, c), DegenerateTurningPoint);
  CHECK_THROWS_AS(period_omega(p, c + 1e-12), DegenerateTurningPoint);
  // continuity in a
  const double a = 0.5;
  const double d1 = std::abs(period_omega(p, a + 1e-2) - period_omega(p, a));
  const double d2 = std::abs(period_omega(p, a + 1e-3) - period_omega(p, a));
  const double d3 = std::abs(period_omega(p, a + 1e-4) - period_omega(p, a));
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  CHECK(d3 < 1e-3);
}

TEST_CASE("torus case in CP^n: every solution closes after one turn") {
  ReducedProblem p(ActionCase::cpn_torus(2, {0.3}), 0.5);
  for (double a : {0.3, 0.6, 1.2}) CHECK(std::abs(period_omega(p, a) - kPi) < 1e-12);
  const Trajectory tr = integrate(p, {0.6, 0.0}, 10.0);
  REQUIRE(tr.classification.kind == Classification::Kind::Closed);
  CHECK(tr.classification.pq == Rational{1, 1});
}

TEST_CASE("blow-up angle") {
  ReducedProblem p(ActionCase::cn_so(2), 1.0);
  const double a = 1.0;
  const double tm = theta_max(p, a);
  double prev = 0.0;
  for (double R : {10.0, 100.0, 1000.0}) {
    const double th = theta_at_radius(p, a, R * a);
    CHECK(th > prev);
    CHECK(th < tm);
    prev = th;
  }
  CHECK(tm - prev < 1e-3);
  CHECK_THROWS_AS(theta_max(p, 0.3), PreconditionError);
  CHECK_THROWS_AS(theta_max(ReducedProblem(ActionCase::cpn_so(2), 1.0), 0.5), PreconditionError);

  ReducedProblem t(ActionCase::cn_torus(2, {0.3, -0.2}), 1.0);
  const double tt = theta_max(t, 2.0);
  CHECK(std::abs(tt - theta_at_radius(t, 2.0, 2000.0)) < 1e-3);

  // the slope stays finite at finite radius
  IntegrateOptions o;
  o.theta1 = 100.0;
  o.escape_radius = 2000.0;
  CHECK(integrate(t, {2.0, 0.0}, o).stop == StopReason::Escape);
}

TEST_CASE("reflection and periodic extension") {
  ReducedProblem p(ActionCase::cpn_so(2), 0.05);
  const double a = 0.6;
  const double om = period_omega(p, a);
  const Trajectory tr = integrate(p, {a, 0.0}, 2.5 * om);
  const Trajectory ev = extend_by_reflection(tr);
  CHECK(ev.theta_begin() == doctest::Approx(-tr.theta_end()));
  for (double th = 0.0; th < tr.theta_end(); th += 0.05) {
    CHECK(ev.at(-th)[0] == ev.at(th)[0]);
    CHECK(ev.at(-th)[1] == -ev.at(th)[1]);
  }
  // period 2 Omega along the forward integration
  double worst = 0.0;
  for (double th = 0.0; th + 2 * om <= tr.theta_end(); th += 0.01) worst = std::max(worst, std::abs(tr.at(th + 2 * om)[0] - tr.at(th)[0]));
  CHECK(worst < 1e-7);

  const Trajectory per = extend_periodic(tr, om, 3);
  CHECK(per.theta_begin() == doctest::Approx(-6 * om));
  CHECK(per.theta_end() == doctest::Approx(6 * om));
  worst = 0.0;
  for (double th = 0.0; th < tr.theta_end(); th += 0.01) worst = std::max(worst, std::abs(per.at(th)[0] - tr.at(th)[0]));
  CHECK(worst < 1e-7);
  CHECK(per.drift_max < 1e-8);

  const Trajectory bad = integrate(p, {a, 0.1}, 2.0);
  CHECK_THROWS_AS(extend_by_reflection(bad), PreconditionError);
  CHECK_THROWS_AS(extend_periodic(integrate(p, {a, 0.0}, 0.5 * om), om, 1), PreconditionError);
}

TEST_CASE("closed search") {
  ReducedProblem p(ActionCase::cpn_so(2), 0.05);
  ClosedSearchOptions opt;
  opt.a_min = 0.2;
  opt.a_max = 0.8;
  opt.count = 30;
  const ClosedSearchResult res = closed_search(p, opt);
  REQUIRE(res.ratio_max - res.ratio_min > 1.0 / 64);
  REQUIRE_FALSE(res.hits.empty());
  for (const ClosedHit& h : res.hits) {
    CHECK(h.pq.q <= 64);
    CHECK(std::abs(h.omega / kPi - h.pq.value()) <= 1e-9 * h.pq.q * h.pq.q);
    CHECK(h.closure_residual < 1e-6);
  }
  // the same search on 3 workers gives the same table
  opt.jobs = 3;
  const ClosedSearchResult par = closed_search(p, opt);
  REQUIRE(par.hits.size() == res.hits.size());
  for (std::size_t i = 0; i < res.hits.size(); ++i) CHECK(par.hits[i].a == res.hits[i].a);

  ReducedProblem f(ActionCase::cpn_so(2), -0.5);
  ClosedSearchOptions bad;
  bad.a_min = 0.02;
  bad.a_max = 0.1;
  bad.count = 10;
  CHECK_THROWS_AS(closed_search(f, bad), PreconditionError);
  bad.count = 1;
  CHECK_THROWS_AS(closed_search(f, bad), InvalidInput);
}

TEST_CASE("scan statuses") {
  ReducedProblem p(ActionCase::cpn_so(2), -0.5);
  const auto rows = scan(p, {0.05, 0.8}, 64);
  CHECK(rows[0].status == "forbidden");
  CHECK(rows[1].status == "ok");
  CHECK(std::isfinite(rows[1].omega));
  ReducedProblem q(ActionCase::cpn_so(2), 0.05);
  CHECK(scan(q, {q.constant_solutions()[0]})[0].status == "degenerate");
}
