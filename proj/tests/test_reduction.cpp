#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hmin/errors.hpp"
#include "hmin/reduction.hpp"

#include <cmath>
#include <random>

using namespace hmin;

namespace {
const double kPi = std::acos(-1.0);
const double kTiny = 1e-13;

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

std::vector<ActionCase> sample_cases() {
  return {ActionCase::cpn_so(2),          ActionCase::cpn_so(4),           ActionCase::cpn_torus(2, {0.3}),
          ActionCase::cpn_torus(3, {0.3, 0.2}), ActionCase::cn_so(2),      ActionCase::cn_so(3),
          ActionCase::cn_torus(2, {0.3, -0.2}), ActionCase::cn_torus(3, {0.5, 0.1, 0.2})};
}

double random_x(const MetricProfile& p, std::mt19937_64& rng) {
  const double hi = p.bounded() ? p.x_max() : p.x_min() + 3.0;
  std::uniform_real_distribution<double> u(p.x_min() + 0.02 * (hi - p.x_min()), hi - 0.02 * (hi - p.x_min()));
  return u(rng);
}
}  // namespace

TEST_CASE("orbit parametrization examples") {
  const CVector a = orbit_param(ActionCase::cpn_so(3), 0.6, 0.0);
  CHECK(std::abs(a(0) - 0.8) < 1e-15);
  CHECK(std::abs(a(1) - 0.6) == 0.0);
  CHECK(a.tail(2).norm() == 0.0);

  const CVector b = orbit_param(ActionCase::cn_so(2), 2.0, kPi);
  CHECK(std::abs(b(0) - Complex(-2.0, 0.0)) < 1e-15);
  CHECK(b.tail(2).norm() == 0.0);

  // c = (0, 0) is excluded by c_1...c_n != 0; a tiny level stands in for it.
  const CVector c = orbit_param(ActionCase::cn_torus(2, {kTiny, kTiny}), 1.0, 0.0);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(c(k) - 1.0) < 1e-12);

  CHECK_THROWS_AS(orbit_param(ActionCase::cpn_so(2), 1.5, 0.0), DomainError);
}

TEST_CASE("induced metric examples") {
  const auto [grr, gtt] = induced_metric(ActionCase::cpn_so(2), 1.0 / std::sqrt(2.0));
  CHECK(grr == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gtt == doctest::Approx(0.25).epsilon(1e-14));
  const auto [frr, ftt] = induced_metric(ActionCase::cn_so(2), 3.0);
  CHECK(frr == 1.0);
  CHECK(ftt == 9.0);
  const auto [trr, ttt] = induced_metric(ActionCase::cn_torus(2, {kTiny, kTiny}), 1.0);
  CHECK(trr == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ttt == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(induced_metric(ActionCase::cpn_so(2), 1.0), DomainError);
  CHECK_THROWS_AS(induced_metric(ActionCase::cn_so(2), 0.0), DomainError);
}

TEST_CASE("orbit volume examples") {
  CHECK(orbit_volume(ActionCase::cpn_so(3), 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  for (double r : {0.3, 1.0, 2.5}) {
    CHECK(std::sqrt(det_phi({0.0, 0.0}, r)) == doctest::Approx(std::sqrt(3.0) * r * r).epsilon(1e-14));
    CHECK(orbit_volume(ActionCase::cn_torus(2, {kTiny, kTiny}), r) == doctest::Approx(std::sqrt(3.0) * r * r).epsilon(1e-11));
  }
  for (double r : {0.1, 0.5}) CHECK(orbit_volume(ActionCase::cpn_torus(3, {0.3, 0.2}), r) == 1.0);
  CHECK(orbit_volume(ActionCase::cn_so(3), 2.0) == doctest::Approx(8.0));
}

TEST_CASE("det phi") {
  CHECK(det_phi({0.0, 0.0}, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(det_phi({0.7}, 0.4) == doctest::Approx(2 * 0.16 + 0.7).epsilon(1e-15));
  CHECK(det_phi({0.0, 0.0, 0.0}, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(det_phi({-0.5, 0.1}, 0.5), DomainError);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 1.0);
  for (int n = 1; n <= 6; ++n)
    for (int t = 0; t < 10; ++t) {
      std::vector<double> c(n);
      for (double& ci : c) ci = u(rng);
      double sigma = 0.0;
      for (double ci : c) sigma = std::max(sigma, -ci);
      const double r = std::sqrt(sigma) + 0.1 + std::abs(u(rng));
      const double dense = phi_matrix(c, r).determinant();
      CHECK(std::abs(det_phi(c, r) - dense) < 1e-10 * std::abs(dense));
    }
}

TEST_CASE("Hsiang-Lawson metric examples") {
  const auto [e, g] = hsiang_lawson_metric(ActionCase::cpn_so(2), kPi / 4);
  CHECK(e == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g == doctest::Approx(0.125).epsilon(1e-15));
  const auto [e2, g2] = hsiang_lawson_metric(ActionCase::cn_so(2), 1.0);
  CHECK(e2 == 1.0);
  CHECK(g2 == 1.0);
}

// The CPnTorus radius form carries the extra constant 1/delta.
TEST_CASE("HL metric equals V^2 times the induced metric") {
  std::mt19937_64 rng(23);
  for (const ActionCase& ac : sample_cases()) {
    const MetricProfile p(ac);
    for (int t = 0; t < 100; ++t) {
      const double x = random_x(p, rng);
      const double r = p.radius(x);
      const auto [grr, gtt] = induced_metric(ac, r);
      const double V = orbit_volume(ac, r);
      const auto [hrr, htt] = hsiang_lawson_metric_radius(ac, r);
      const double scale = ac.variant() == CaseVariant::CPnTorus ? ac.delta() : 1.0;
      CHECK(close(scale * hrr, V * V * grr, 1e-12));
      CHECK(close(scale * htt, V * V * gtt, 1e-12));
    }
  }
}

TEST_CASE("canonical coordinates reproduce the phi forms") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.05, 1.5);
  for (int n : {2, 3, 5}) {
    const ActionCase ac = ActionCase::cpn_so(n);
    for (int t = 0; t < 20; ++t) {
      const double phi = u(rng);
      const double s = std::sin(phi), c = std::cos(phi);
      const auto [e, g] = hsiang_lawson_metric(ac, phi);
      CHECK(close(e, std::pow(s, 2 * n - 2), 1e-12));
      CHECK(close(g, std::pow(s, 2 * n - 2) * s * s * c * c, 1e-12));
      // pullback of the radius form under r = sin(phi)
      const auto [hrr, htt] = hsiang_lawson_metric_radius(ac, s);
      CHECK(close(e, hrr * c * c, 1e-12));
      CHECK(close(g, htt, 1e-12));
    }
  }
  const ActionCase tc = ActionCase::cpn_torus(3, {0.3, 0.2});
  const double d = tc.delta();
  for (int t = 0; t < 20; ++t) {
    const double phi = u(rng);
    const double s = std::sin(phi), c = std::cos(phi);
    const auto [e, g] = hsiang_lawson_metric(tc, phi);
    CHECK(close(e, 1.0, 1e-12));
    CHECK(close(g, s * s * c * c, 1e-12));
    const auto [hrr, htt] = hsiang_lawson_metric_radius(tc, std::sqrt(d) * s);
    CHECK(close(e, hrr * d * c * c, 1e-12));
    CHECK(close(g, htt, 1e-12));
  }
}

TEST_CASE("flat radius of the torus case") {
  std::mt19937_64 rng(31);
  for (const ActionCase& ac : {ActionCase::cn_torus(2, {0.3, -0.2}), ActionCase::cn_torus(3, {0.5, 0.1, 0.2})}) {
    const MetricProfile p(ac);
    for (int t = 0; t < 30; ++t) {
      const double r = random_x(p, rng);
      const double R = flat_radius(ac, r);
      CHECK(close(radius_from_flat(ac, R), r, 1e-12));
      const double h = 1e-5 * r;
      const double dRdr = (flat_radius(ac, r + h) - flat_radius(ac, r - h)) / (2 * h);
      const auto [hrr, htt] = hsiang_lawson_metric(ac, r);
      CHECK(close(hrr / (dRdr * dRdr), 1.0, 1e-8));
      CHECK(close(htt / (R * R), 1.0, 1e-12));
    }
  }
}

TEST_CASE("profile derivatives match finite differences") {
  std::mt19937_64 rng(37);
  for (const ActionCase& ac : sample_cases()) {
    const MetricProfile p(ac);
    for (int t = 0; t < 20; ++t) {
      const double x = random_x(p, rng);
      const double h = 1e-6;
      const HLJet j = p.hl_jet(x);
      const auto [ep, gp] = p.hsiang_lawson(x + h);
      const auto [em, gm] = p.hsiang_lawson(x - h);
      CHECK(std::abs(j.dE - (ep - em) / (2 * h)) < 1e-6 * std::max(1.0, std::abs(j.dE)));
      CHECK(std::abs(j.dG - (gp - gm) / (2 * h)) < 1e-6 * std::max(1.0, std::abs(j.dG)));
      const double dA = (p.area_primitive(x + h) - p.area_primitive(x - h)) / (2 * h);
      CHECK(std::abs(p.area_density(x) - dA) < 1e-7 * std::max(1.0, dA));
      const auto [gxx, gtt] = p.induced(x);
      CHECK(close(p.area_density(x), 2.0 * std::sqrt(gxx * gtt), 1e-12));
    }
  }
}

TEST_CASE("profile domain") {
  const MetricProfile so(ActionCase::cpn_so(2));
  CHECK(so.x_min() == 0.0);
  CHECK(so.x_max() == doctest::Approx(kPi / 2));
  CHECK_FALSE(so.in_domain(0.0));
  CHECK_THROWS_AS(so.check(kPi / 2), DomainError);
  const MetricProfile ct(ActionCase::cn_torus(2, {0.3, -0.2}));
  CHECK(ct.x_min() == doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));
  CHECK_FALSE(ct.bounded());
  CHECK_THROWS_AS(ct.check(0.3), DomainError);
}
