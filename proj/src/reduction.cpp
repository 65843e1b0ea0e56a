#include "hmin/reduction.hpp"

#include "hmin/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace hmin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using std::numbers::pi;

double torus_product(const std::vector<double>& c, double r) {
  double p = 1.0;
  for (double ck : c) {
    const double t = r * r + ck;
    if (!(t > 0.0)) throw DomainError("r^2 + c_k must be positive");
    p *= t;
  }
  return p;
}

// S = sum r^2/(r^2+c_k) and dS/dr.
std::pair<double, double> torus_sum(const std::vector<double>& c, double r) {
  double s = 0.0, ds = 0.0;
  for (double ck : c) {
    const double t = r * r + ck;
    s += r * r / t;
    ds += 2.0 * r * ck / (t * t);
  }
  return {s, ds};
}

// Unit-sphere volume |S^k|.
double sphere_volume(int k) {
  return 2.0 * std::pow(pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double prod(const std::vector<double>& c) {
  double p = 1.0;
  for (double v : c) p *= v;
  return p;
}

void require_radius(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// Closed radius domain check.
void check_closed_radius(const ActionCase& ac, double r) {
  require_radius(std::isfinite(r), "radius must be finite");
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      require_radius(r >= 0.0 && r <= 1.0, "radius outside [0, 1]");
      break;
    case CaseVariant::CPnTorus:
      require_radius(r >= 0.0 && r <= std::sqrt(ac.delta()), "radius outside [0, sqrt(delta)]");
      break;
    case CaseVariant::CnSO:
      require_radius(r >= 0.0, "radius must be nonnegative");
      break;
    case CaseVariant::CnTorus:
      require_radius(r >= std::sqrt(ac.sigma()) && r >= 0.0, "radius below sqrt(sigma)");
      break;
  }
}

void check_open_radius(const ActionCase& ac, double r) {
  check_closed_radius(ac, r);
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      require_radius(r > 0.0 && r < 1.0, "radius on a singular or exceptional orbit");
      break;
    case CaseVariant::CPnTorus:
      require_radius(r > 0.0 && r < std::sqrt(ac.delta()), "radius on a singular orbit");
      break;
    case CaseVariant::CnSO:
      require_radius(r > 0.0, "radius on the singular orbit");
      break;
    case CaseVariant::CnTorus:
      require_radius(r > std::sqrt(ac.sigma()) && r > 0.0, "radius on a singular orbit");
      break;
  }
}

}  // namespace

MetricProfile::MetricProfile(ActionCase ac, double collar)
    : case_(std::move(ac)), collar_(collar) {
  if (!(collar_ > 0.0)) throw InvalidInput("collar must be positive");
  switch (case_.variant()) {
    case CaseVariant::CPnSO:
    case CaseVariant::CPnTorus:
      x_min_ = 0.0;
      x_max_ = 0.5 * pi;
      break;
    case CaseVariant::CnSO:
      x_min_ = 0.0;
      x_max_ = kInf;
      break;
    case CaseVariant::CnTorus:
      x_min_ = std::sqrt(case_.sigma());
      x_max_ = kInf;
      break;
  }
}

bool MetricProfile::bounded() const { return std::isfinite(x_max_); }

bool MetricProfile::in_domain(double x) const {
  return std::isfinite(x) && x >= x_min_ + collar_ && x <= x_max_ - collar_;
}

void MetricProfile::check(double x) const {
  if (!in_domain(x)) throw DomainError("coordinate outside the regular domain or inside its collar");
}

MetricJet MetricProfile::jet(double x) const {
  check(x);
  const int n = case_.n();
  MetricJet j{};
  switch (case_.variant()) {
    case CaseVariant::CPnSO:
    case CaseVariant::CPnTorus: {
      const double s = std::sin(x), c = std::cos(x);
      j.g_xx = 1.0;
      j.dg_xx = 0.0;
      j.g_tt = s * s * c * c;
      j.dg_tt = 2.0 * s * c * (c * c - s * s);
      if (case_.variant() == CaseVariant::CPnSO) {
        j.V = std::pow(s, n - 1);
        j.dV = n == 1 ? 0.0 : (n - 1) * std::pow(s, n - 2) * c;
      } else {
        j.V = 1.0;
        j.dV = 0.0;
      }
      break;
    }
    case CaseVariant::CnSO:
      j.g_xx = 1.0;
      j.dg_xx = 0.0;
      j.g_tt = x * x;
      j.dg_tt = 2.0 * x;
      j.V = std::pow(x, n);
      j.dV = n * std::pow(x, n - 1);
      break;
    case CaseVariant::CnTorus: {
      const auto& c = case_.c();
      const double P = torus_product(c, x);
      const auto [S, dS] = torus_sum(c, x);
      const double dP = P * [&] {
        double t = 0.0;
        for (double ck : c) t += 2.0 * x / (x * x + ck);
        return t;
      }();
      const double det = P * (1.0 + S);
      const double ddet = dP * (1.0 + S) + P * dS;
      j.g_xx = 1.0 + S;
      j.dg_xx = dS;
      j.g_tt = x * x / (1.0 + S);
      j.dg_tt = 2.0 * x / (1.0 + S) - x * x * dS / ((1.0 + S) * (1.0 + S));
      j.V = std::sqrt(det);
      j.dV = ddet / (2.0 * j.V);
      break;
    }
  }
  return j;
}

std::pair<double, double> MetricProfile::induced(double x) const {
  const MetricJet j = jet(x);
  return {j.g_xx, j.g_tt};
}

double MetricProfile::volume(double x) const { return jet(x).V; }

HLJet MetricProfile::hl_jet(double x) const {
  const MetricJet j = jet(x);
  const double V2 = j.V * j.V, dV2 = 2.0 * j.V * j.dV;
  return {V2 * j.g_xx, V2 * j.g_tt, dV2 * j.g_xx + V2 * j.dg_xx, dV2 * j.g_tt + V2 * j.dg_tt};
}

std::pair<double, double> MetricProfile::hsiang_lawson(double x) const {
  const HLJet h = hl_jet(x);
  return {h.E, h.G};
}

double MetricProfile::area_primitive(double x) const {
  check(x);
  if (case_.projective()) {
    const double s = std::sin(x);
    return s * s;
  }
  return x * x;
}

double MetricProfile::area_density(double x) const {
  check(x);
  if (case_.projective()) return std::sin(2.0 * x);
  return 2.0 * x;
}

double MetricProfile::radius(double x) const {
  switch (case_.variant()) {
    case CaseVariant::CPnSO:
      return std::sin(x);
    case CaseVariant::CPnTorus:
      return std::sqrt(case_.delta()) * std::sin(x);
    default:
      return x;
  }
}

double MetricProfile::from_radius(double r) const {
  check_closed_radius(case_, r);
  switch (case_.variant()) {
    case CaseVariant::CPnSO:
      return std::asin(r);
    case CaseVariant::CPnTorus:
      return std::asin(std::min(1.0, r / std::sqrt(case_.delta())));
    default:
      return r;
  }
}

double MetricProfile::volume_scale() const {
  const int n = case_.n();
  switch (case_.variant()) {
    case CaseVariant::CPnSO:
      return sphere_volume(n - 1);
    case CaseVariant::CPnTorus:
      return std::pow(2.0 * pi, n - 1) * case_.delta() * std::sqrt(prod(case_.c()));
    case CaseVariant::CnSO:
      return sphere_volume(n);
    case CaseVariant::CnTorus:
      return std::pow(2.0 * pi, n);
  }
  return 0.0;
}

CVector MetricProfile::orbit_point(double x, double theta) const {
  return orbit_param(case_, radius(x), theta);
}

CVector orbit_param(const ActionCase& ac, double r, double theta) {
  check_closed_radius(ac, r);
  const int n = ac.n();
  CVector z = CVector::Zero(n + 1);
  const Complex e = std::polar(1.0, theta);
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      z(0) = std::sqrt(std::max(0.0, 1.0 - r * r));
      z(1) = r * e;
      break;
    case CaseVariant::CPnTorus:
      z(0) = std::sqrt(std::max(0.0, ac.delta() - r * r));
      for (int j = 1; j < n; ++j) z(j) = std::sqrt(ac.c()[j - 1]);
      z(n) = r * e;
      break;
    case CaseVariant::CnSO:
      z(0) = r * e;
      break;
    case CaseVariant::CnTorus:
      for (int j = 0; j < n; ++j) z(j) = std::sqrt(std::max(0.0, r * r + ac.c()[j]));
      z(n) = r * e;
      break;
  }
  return z;
}

std::pair<double, double> induced_metric(const ActionCase& ac, double r) {
  check_open_radius(ac, r);
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      return {1.0 / (1.0 - r * r), r * r * (1.0 - r * r)};
    case CaseVariant::CPnTorus: {
      const double d = ac.delta();
      return {d / (d - r * r), r * r * (d - r * r) / d};
    }
    case CaseVariant::CnSO:
      return {1.0, r * r};
    case CaseVariant::CnTorus: {
      const double P = torus_product(ac.c(), r);
      const double det = det_phi(ac.c(), r);
      return {det / P, r * r * P / det};
    }
  }
  return {};
}

double orbit_volume(const ActionCase& ac, double r) {
  check_closed_radius(ac, r);
  switch (ac.variant()) {
    case CaseVariant::CPnSO:
      return std::pow(r, ac.n() - 1);
    case CaseVariant::CPnTorus:
      return 1.0;
    case CaseVariant::CnSO:
      return std::pow(r, ac.n());
    case CaseVariant::CnTorus:
      return std::sqrt(det_phi(ac.c(), r));
  }
  return 0.0;
}

std::pair<double, double> hsiang_lawson_metric(const ActionCase& ac, double x) {
  return MetricProfile(ac).hsiang_lawson(x);
}

std::pair<double, double> hsiang_lawson_metric_radius(const ActionCase& ac, double r) {
  check_open_radius(ac, r);
  if (ac.variant() == CaseVariant::CPnTorus) {
    const double d = ac.delta();
    return {1.0 / (d - r * r), r * r * (d - r * r) / (d * d)};
  }
  const auto [g_rr, g_tt] = induced_metric(ac, r);
  const double V = orbit_volume(ac, r);
  return {V * V * g_rr, V * V * g_tt};
}

double det_phi(const std::vector<double>& c, double r) {
  if (c.empty()) throw InvalidInput("det_phi needs at least one level constant");
  const double P = torus_product(c, r);
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    double term = r * r;
    for (std::size_t k = 0; k < c.size(); ++k)
      if (k != j) term *= r * r + c[k];
    sum += term;
  }
  return sum + P;
}

Eigen::MatrixXd phi_matrix(const std::vector<double>& c, double r) {
  const int n = static_cast<int>(c.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, r * r);
  for (int i = 0; i < n; ++i) m(i, i) = 2.0 * r * r + c[i];
  return m;
}

double flat_radius(const ActionCase& ac, double r) {
  if (ac.variant() != CaseVariant::CnTorus) throw StateError("flat radius is defined for cn-torus only");
  return std::sqrt(r * r * torus_product(ac.c(), r));
}

double radius_from_flat(const ActionCase& ac, double R) {
  if (ac.variant() != CaseVariant::CnTorus) throw StateError("flat radius is defined for cn-torus only");
  const double lo = std::sqrt(ac.sigma());
  // R vanishes at the lower end of the domain in both sigma = 0 and sigma > 0.
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("flat radius must be positive");
  double hi = std::max(1.0, 2.0 * lo);
  while (flat_radius(ac, hi) < R) hi *= 2.0;
  // R(r) is increasing on the domain since dR/dr = det(Phi)/sqrt(P) > 0.
  boost::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve(
      [&](double r) { return r <= lo ? -R : flat_radius(ac, r) - R; }, lo, hi,
      boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (res.first + res.second);
}

}  // namespace hmin
