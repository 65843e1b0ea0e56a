#include "hmin/reduced_ode.hpp"

#include "hmin/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace hmin {

namespace {

constexpr double kLambdaRelTol = 1e-12;

bool near(double a, double b) {
  return std::abs(a - b) <= kLambdaRelTol * std::max(1.0, std::abs(b));
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double refine_root(const std::function<double(double)>& f, double lo, double hi) {
  boost::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                              iters);
  return 0.5 * (res.first + res.second);
}

}  // namespace

ReducedProblem::ReducedProblem(ActionCase ac, double K, double collar)
    : profile_(std::move(ac), collar), K_(K) {
  if (!std::isfinite(K) || K == 0.0) throw InvalidInput("K must be finite and nonzero");
}

double ReducedProblem::lambda() const {
  if (!lambda_) throw StateError("lambda is not set");
  return *lambda_;
}

void ReducedProblem::validate_initial(const InitialCondition& ic) const {
  if (!std::isfinite(ic.a) || !std::isfinite(ic.b)) throw InvalidInput("initial condition must be finite");
  profile_.check(ic.a);
}

double ReducedProblem::lambda_from_ic(const InitialCondition& ic) {
  validate_initial(ic);
  lambda_ = lambda_at(ic.a, ic.b);
  ic_ = ic;
  return *lambda_;
}

ReducedProblem ReducedProblem::with_initial(const InitialCondition& ic) const {
  ReducedProblem out = *this;
  out.lambda_from_ic(ic);
  return out;
}

ReducedProblem ReducedProblem::with_lambda(double lambda) const {
  if (!std::isfinite(lambda)) throw InvalidInput("lambda must be finite");
  ReducedProblem out = *this;
  out.lambda_ = lambda;
  out.ic_.reset();
  return out;
}

double ReducedProblem::lagrangian_density(double x, double xp) const {
  const HLJet h = profile_.hl_jet(x);
  return std::sqrt(h.E * xp * xp + h.G) - 0.5 * K_ * profile_.area_primitive(x);
}

double ReducedProblem::momentum(double x, double xp) const {
  const HLJet h = profile_.hl_jet(x);
  return h.E * xp / std::sqrt(h.E * xp * xp + h.G);
}

double ReducedProblem::velocity_from_momentum(double x, double p) const {
  const HLJet h = profile_.hl_jet(x);
  const double room = h.E - p * p;
  if (!(room > 0.0)) throw NumericalDomainError("|p| reaches the bound sqrt(E)");
  return p * std::sqrt(h.G) / std::sqrt(h.E * room);
}

double ReducedProblem::hamiltonian(double x, double p) const {
  const HLJet h = profile_.hl_jet(x);
  const double room = h.E - p * p;
  if (room < 0.0) throw NumericalDomainError("|p| exceeds the bound sqrt(E)");
  return -std::sqrt(h.G / h.E) * std::sqrt(room) + 0.5 * K_ * profile_.area_primitive(x);
}

double ReducedProblem::first_integral(double x, double xp) const {
  // Direct form -G/W avoids the cancellation in E - p^2 for large slopes.
  const HLJet h = profile_.hl_jet(x);
  return -h.G / std::sqrt(h.E * xp * xp + h.G) + 0.5 * K_ * profile_.area_primitive(x);
}

double ReducedProblem::lambda_at(double x, double xp) const { return -first_integral(x, xp); }

double ReducedProblem::el_acceleration(double x, double xp) const {
  const int n = action_case().n();
  switch (action_case().variant()) {
    case CaseVariant::CPnSO: {
      profile_.check(x);
      const double s = std::sin(x), c = std::cos(x);
      const double w = std::sqrt(s * s * c * c + xp * xp);
      return (((n + 1) * c * c - 2.0 * s * s) * xp * xp + s * s * c * c * (n * c * c - s * s) -
              K_ * w * w * w / std::pow(s, n - 1)) /
             (s * c);
    }
    case CaseVariant::CnSO: {
      profile_.check(x);
      const double w = std::sqrt(x * x + xp * xp);
      return (n + 2) * xp * xp / x + (n + 1) * x - K_ * w * w * w / std::pow(x, n + 1);
    }
    default:
      return el_acceleration_generic(x, xp);
  }
}

double ReducedProblem::el_acceleration_generic(double x, double xp) const {
  const HLJet h = profile_.hl_jet(x);
  const double W = std::sqrt(h.E * xp * xp + h.G);
  const double Ap = profile_.area_density(x);
  return -h.dE / (2.0 * h.E) * xp * xp + h.dG / h.G * xp * xp + h.dG / (2.0 * h.E) -
         K_ * Ap * W * W * W / (2.0 * h.E * h.G);
}

double ReducedProblem::el_residual(double x, double xp, double xpp) const {
  const int n = action_case().n();
  switch (action_case().variant()) {
    case CaseVariant::CnSO: {
      profile_.check(x);
      const double w2 = x * x + xp * xp, w = std::sqrt(w2);
      return (-x * xpp + 2.0 * xp * xp + x * x) / (w2 * w) + n / w - K_ / std::pow(x, n);
    }
    case CaseVariant::CPnSO: {
      profile_.check(x);
      const double s = std::sin(x), c = std::cos(x);
      const double w = std::sqrt(s * s * c * c + xp * xp);
      return std::pow(s, n - 1) / (w * w * w) *
                 (-xpp * s * c + ((n + 1) * c * c - 2.0 * s * s) * xp * xp +
                  s * s * c * c * (n * c * c - s * s)) -
             K_;
    }
    default:
      return xpp - el_acceleration_generic(x, xp);
  }
}

double ReducedProblem::mu(double x) const { return lambda() + 0.5 * K_ * profile_.area_primitive(x); }

double ReducedProblem::radicand(double x) const {
  const double m = mu(x);
  return profile_.hl_jet(x).G - m * m;
}

double ReducedProblem::turning_function(double x) const {
  return std::sqrt(profile_.hl_jet(x).G) - mu(x);
}

double ReducedProblem::radial_slope(double x, int branch) const {
  if (branch != 1 && branch != -1) throw InvalidInput("branch must be +1 or -1");
  const HLJet h = profile_.hl_jet(x);
  const double m = mu(x);
  if (m == 0.0) throw SingularSlopeError("lambda + (K/2) A(x) vanishes");
  double f = h.G - m * m;
  if (f < 0.0) {
    if (f < -1e-14 * h.G) throw TurningRegionError("slope radicand is negative");
    f = 0.0;
  }
  return branch * std::sqrt(h.G * f) / (std::sqrt(h.E) * m);
}

Admissibility ReducedProblem::admissibility() const {
  const double lam = lambda();
  switch (action_case().variant()) {
    case CaseVariant::CPnSO:
    case CaseVariant::CPnTorus: {
      const double lo = std::min(0.0, -0.5 * K_), hi = std::max(0.0, -0.5 * K_);
      if ((lam >= lo && lam <= hi) || near(lam, lo) || near(lam, hi))
        return {false, "lambda = " + fmt_double(lam) + " lies in the closed interval between 0 and -K/2 = " +
                           fmt_double(-0.5 * K_)};
      return {};
    }
    case CaseVariant::CnSO:
      if (near(lam, 0.0)) return {false, "lambda = 0"};
      return {};
    case CaseVariant::CnTorus: {
      if (near(lam, 0.0)) return {false, "lambda = 0"};
      const auto& c = action_case().c();
      for (std::size_t i = 0; i < c.size(); ++i)
        if (near(lam, -0.5 * K_ * c[i]))
          return {false, "lambda = -(K/2) c_" + std::to_string(i + 1)};
      return {};
    }
  }
  return {};
}

double ReducedProblem::constant_curvature(double x) const {
  const int n = action_case().n();
  switch (action_case().variant()) {
    case CaseVariant::CPnSO: {
      profile_.check(x);
      const double s = std::sin(x), c = std::cos(x);
      return std::pow(s, n - 2) * (n * c * c - s * s) / c;
    }
    case CaseVariant::CPnTorus:
      profile_.check(x);
      return 2.0 / std::tan(2.0 * x);
    case CaseVariant::CnSO:
      profile_.check(x);
      return (n + 1) * std::pow(x, n - 1);
    case CaseVariant::CnTorus: {
      const HLJet h = profile_.hl_jet(x);
      return h.dG / (profile_.area_density(x) * std::sqrt(h.G));
    }
  }
  return 0.0;
}

std::vector<double> ReducedProblem::constant_solutions() const {
  const int n = action_case().n();
  if (action_case().variant() == CaseVariant::CnSO) {
    if (K_ <= 0.0) return {};
    return {std::pow(K_ / (n + 1), 1.0 / (n - 1))};
  }
  // Bracket scan of constant_curvature - K on a grid adapted to the domain.
  const double eps = profile_.collar();
  const double lo = profile_.x_min() + 2.0 * eps;
  std::vector<double> grid;
  constexpr int kScan = 4000;
  if (profile_.bounded()) {
    const double hi = profile_.x_max() - 2.0 * eps;
    for (int i = 0; i <= kScan; ++i) grid.push_back(lo + (hi - lo) * i / kScan);
  } else {
    // Large-r growth is like (n+1) r^{n-1}; go well past the level |K|.
    const double far = 10.0 * std::max(1.0, std::pow(std::abs(K_), 1.0 / (n - 1))) + 10.0 * lo;
    const double t0 = std::log(2.0 * eps), t1 = std::log(far);
    for (int i = 0; i <= kScan; ++i) grid.push_back(profile_.x_min() + std::exp(t0 + (t1 - t0) * i / kScan));
  }
  auto g = [&](double x) { return constant_curvature(x) - K_; };
  std::vector<double> roots;
  double xa = grid.front(), ga = g(xa);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double xb = grid[i], gb = g(xb);
    if (ga == 0.0) {
      roots.push_back(xa);
    } else if (std::isfinite(ga) && std::isfinite(gb) && ga * gb < 0.0) {
      roots.push_back(refine_root(g, xa, xb));
    }
    xa = xb;
    ga = gb;
  }
  return roots;
}

bool ReducedProblem::escape_monotone(double a) const {
  if (action_case().projective()) throw StateError("escape is defined for the C^{n+1} cases only");
  profile_.check(a);
  // h(a) = 0 at a turning start; require h > 0 on a geometric grid beyond a
  // and the asymptotic growth sqrt(G) ~ r^{n+1} dominating mu ~ r^2.
  constexpr int kGrid = 2000;
  const double t0 = std::log(1e-8), t1 = std::log(1e8);
  for (int i = 0; i <= kGrid; ++i) {
    const double r = a * (1.0 + std::exp(t0 + (t1 - t0) * i / kGrid));
    if (!(turning_function(r) > 0.0)) return false;
  }
  return mu(a) > 0.0;
}

}  // namespace hmin
