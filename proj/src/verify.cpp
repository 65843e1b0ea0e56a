#include "hmin/verify.hpp"

#include "hmin/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hmin {

double lagrangian_residual(const ImmersionCloud& cloud) {
  double worst = 0.0;
  for (const CloudSample& s : cloud.samples)
    for (std::size_t i = 0; i < s.frame.size(); ++i)
      for (std::size_t j = i + 1; j < s.frame.size(); ++j)
        worst = std::max(worst, std::abs(kaehler_form(s.point, s.frame[i], s.frame[j])));
  return worst;
}

namespace {

struct RawCurvature {
  double k, speed;
};

RawCurvature raw_curvature(const MetricProfile& prof, const PlaneCurve& curve, double s, double h) {
  const auto c0 = curve(s), cp = curve(s + h), cm = curve(s - h);
  const double x = c0[0];
  prof.check(x);
  const double x1 = (cp[0] - cm[0]) / (2.0 * h), t1 = (cp[1] - cm[1]) / (2.0 * h);
  const double x2 = (cp[0] - 2.0 * c0[0] + cm[0]) / (h * h), t2 = (cp[1] - 2.0 * c0[1] + cm[1]) / (h * h);
  const auto [E, G] = prof.hsiang_lawson(x);
  const auto [Ep, Gp] = prof.hsiang_lawson(x + h);
  const auto [Em, Gm] = prof.hsiang_lawson(x - h);
  const double dE = (Ep - Em) / (2.0 * h), dG = (Gp - Gm) / (2.0 * h);
  const double T2 = E * x1 * x1 + G * t1 * t1;
  const double T = std::sqrt(T2);
  // Covariant acceleration and unit normal.
  const double ax = x2 + dE / (2.0 * E) * x1 * x1 - dG / (2.0 * E) * t1 * t1;
  const double at = t2 + dG / G * x1 * t1;
  const double nx = -std::sqrt(G / E) * t1 / T, nt = std::sqrt(E / G) * x1 / T;
  return {(E * ax * nx + G * at * nt) / T2, T};
}

void require_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("finite-difference step must be positive");
}

void check_halving(double coarse, double fine, double value, double floor, const char* what) {
  if (std::abs(coarse - fine) > 0.1 * std::max(std::abs(value), floor))
    throw StepError(std::string(what) + ": step halving changes the estimate by more than 10%");
}

std::vector<double> centres(double lo, double hi, int count) {
  if (count < 1) throw InvalidInput("sample count must be >= 1");
  if (!(lo < hi)) throw InvalidInput("sample range must satisfy lo < hi");
  std::vector<double> s(count);
  for (int i = 0; i < count; ++i) s[i] = lo + (hi - lo) * (i + 0.5) / count;
  return s;
}

// First fundamental form, its inverse and the mean curvature vector at u.
struct Local {
  std::vector<CVector> Fa;
  Eigen::MatrixXd g, ginv;
  double sqrtg = 0.0;
  CVector H;
};

Local local_geometry(const ImmersionMap& F, const RVector& u, double h) {
  const int d = static_cast<int>(u.size());
  const CVector F0 = F(u);
  std::vector<CVector> plus(d), minus(d);
  Local L;
  L.Fa.resize(d);
  RVector w = u;
  for (int a = 0; a < d; ++a) {
    w(a) = u(a) + h;
    plus[a] = F(w);
    w(a) = u(a) - h;
    minus[a] = F(w);
    w(a) = u(a);
    L.Fa[a] = (plus[a] - minus[a]) / (2.0 * h);
  }
  L.g.resize(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) L.g(a, b) = real_dot(L.Fa[a], L.Fa[b]);
  double diag = 1.0;
  for (int a = 0; a < d; ++a) {
    if (!(L.g(a, a) > 0.0)) throw DegenerateParamError("vanishing coordinate derivative");
    diag *= L.g(a, a);
  }
  const double det = L.g.determinant();
  if (!(det > 1e-10 * diag)) throw DegenerateParamError("first fundamental form is rank deficient");
  L.ginv = L.g.inverse();
  L.sqrtg = std::sqrt(det);
  // Second derivatives and their normal parts.
  auto normal = [&](const CVector& v) {
    Eigen::VectorXd t(d);
    for (int c = 0; c < d; ++c) t(c) = real_dot(L.Fa[c], v);
    const Eigen::VectorXd coef = L.ginv * t;
    CVector out = v;
    for (int c = 0; c < d; ++c) out -= coef(c) * L.Fa[c];
    return out;
  };
  L.H = CVector::Zero(F0.size());
  for (int a = 0; a < d; ++a) {
    const CVector Faa = (plus[a] - 2.0 * F0 + minus[a]) / (h * h);
    L.H += L.ginv(a, a) * normal(Faa);
    for (int b = a + 1; b < d; ++b) {
      RVector q = u;
      q(a) += h;
      q(b) += h;
      const CVector pp = F(q);
      q(b) -= 2.0 * h;
      const CVector pm = F(q);
      q(a) -= 2.0 * h;
      const CVector mm = F(q);
      q(b) += 2.0 * h;
      const CVector mp = F(q);
      const CVector Fab = (pp - pm - mp + mm) / (4.0 * h * h);
      L.H += 2.0 * L.ginv(a, b) * normal(Fab);
    }
  }
  return L;
}

// sqrt(g) g^{ab} alpha_b at u.
Eigen::VectorXd alpha_flux(const ImmersionMap& F, const RVector& u, double h) {
  const Local L = local_geometry(F, u, h);
  const int d = static_cast<int>(u.size());
  Eigen::VectorXd alpha(d);
  for (int b = 0; b < d; ++b) alpha(b) = (L.H.adjoint() * L.Fa[b])(0).imag();
  return L.sqrtg * (L.ginv * alpha);
}

}  // namespace

CurvatureEstimate quotient_curvature(const MetricProfile& profile, const PlaneCurve& curve, double s, double h,
                                     double floor) {
  require_step(h);
  const RawCurvature coarse = raw_curvature(profile, curve, s, h);
  const RawCurvature fine = raw_curvature(profile, curve, s, 0.5 * h);
  CurvatureEstimate out;
  out.k = (4.0 * fine.k - coarse.k) / 3.0;
  out.error = std::abs(coarse.k - fine.k);
  check_halving(coarse.k, fine.k, out.k, floor, "quotient curvature");
  const double V = profile.volume(curve(s)[0]);
  out.v2k = V * V * out.k;
  out.speed = (4.0 * fine.speed - coarse.speed) / 3.0;
  return out;
}

std::function<double(double)> quotient_curvature_fn(const MetricProfile& profile, PlaneCurve curve, double h) {
  return [profile, curve = std::move(curve), h](double s) { return quotient_curvature(profile, curve, s, h).k; };
}

double QuotientSeries::residual(double K) const {
  double worst = 0.0;
  for (double v : v2k) worst = std::max(worst, std::abs(v - K));
  return worst;
}

QuotientSeries quotient_series(const MetricProfile& profile, const PlaneCurve& curve, double s_lo, double s_hi,
                               int count, double h) {
  QuotientSeries out;
  out.s = centres(s_lo, s_hi, count);
  for (double s : out.s) {
    const CurvatureEstimate e = quotient_curvature(profile, curve, s, h);
    out.k.push_back(e.k);
    out.v2k.push_back(e.v2k);
    out.max_error = std::max(out.max_error, e.error);
  }
  double sum = 0.0;
  for (double v : out.v2k) sum += v;
  out.mean = sum / count;
  double var = 0.0;
  for (double v : out.v2k) var += (v - out.mean) * (v - out.mean);
  out.stdev = count > 1 ? std::sqrt(var / (count - 1)) : 0.0;
  return out;
}

double beta_residual(const MetricProfile& profile, const PlaneCurve& curve, double s_lo, double s_hi, int count,
                    double h, double floor) {
  require_step(h);
  const double H = 20.0 * h;
  auto beta = [&](double s) { return -quotient_curvature(profile, curve, s, h).v2k; };
  double worst = 0.0;
  for (double s : centres(s_lo, s_hi, count)) {
    const double speed = quotient_curvature(profile, curve, s, h).speed;
    const double d1 = (beta(s + H) - beta(s - H)) / (2.0 * H) / speed;
    const double d2 = (beta(s + 0.5 * H) - beta(s - 0.5 * H)) / H / speed;
    const double dr = (4.0 * d2 - d1) / 3.0;
    check_halving(d1, d2, dr, floor, "beta residual");
    worst = std::max(worst, std::abs(dr));
  }
  return worst;
}

CVector mean_curvature_fd(const ImmersionMap& F, const RVector& u0, double h) {
  require_step(h);
  return local_geometry(F, u0, h).H;
}

MeanCurvature mean_curvature_richardson(const ImmersionMap& F, const RVector& u0, double h) {
  const CVector coarse = mean_curvature_fd(F, u0, h);
  const CVector fine = mean_curvature_fd(F, u0, 0.5 * h);
  return {(4.0 * fine - coarse) / 3.0, (coarse - fine).norm()};
}

DeltaAlpha delta_alpha_H_fd(const ImmersionMap& F, const std::vector<RVector>& grid, double h, double h_inner,
                            double floor) {
  require_step(h);
  require_step(h_inner);
  DeltaAlpha out;
  for (const RVector& u : grid) {
    const Local L = local_geometry(F, u, h_inner);
    const int d = static_cast<int>(u.size());
    for (int a = 0; a < d; ++a)
      for (int b = a + 1; b < d; ++b) {
        const double w = (L.Fa[a].adjoint() * L.Fa[b])(0).imag();
        if (std::abs(w) > 1e-6 * L.Fa[a].norm() * L.Fa[b].norm())
          throw PreconditionError("immersion is not Lagrangian; delta alpha_H is undefined");
      }
    const double Hn = L.H.norm();
    out.max_mean_curvature = std::max(out.max_mean_curvature, Hn);
    out.min_mean_curvature = std::min(out.min_mean_curvature, Hn);
    auto divergence = [&](double step) {
      double div = 0.0;
      RVector w = u;
      for (int a = 0; a < d; ++a) {
        w(a) = u(a) + step;
        const double fp = alpha_flux(F, w, h_inner)(a);
        w(a) = u(a) - step;
        const double fm = alpha_flux(F, w, h_inner)(a);
        w(a) = u(a);
        div += (fp - fm) / (2.0 * step);
      }
      return -div / L.sqrtg;
    };
    const double D1 = divergence(h), D2 = divergence(0.5 * h);
    const double DR = (4.0 * D2 - D1) / 3.0;
    check_halving(D1, D2, DR, floor, "delta alpha_H");
    out.max_abs = std::max(out.max_abs, std::abs(DR));
    out.error_bar = std::max(out.error_bar, std::abs(D1 - D2));
    ++out.points;
  }
  return out;
}

std::vector<RVector> interior_grid(const Immersion& imm, const std::vector<int>& counts, double margin) {
  if (static_cast<int>(counts.size()) != imm.dim) throw InvalidInput("one grid count per parameter required");
  std::vector<std::vector<double>> axes(imm.dim);
  for (int a = 0; a < imm.dim; ++a) {
    if (counts[a] < 1) throw InvalidInput("grid counts must be >= 1");
    const double lo = imm.lo(a), hi = imm.hi(a);
    for (int k = 0; k < counts[a]; ++k) {
      if (imm.periodic[a])
        axes[a].push_back(lo + (hi - lo) * (k + 0.5) / counts[a]);
      else
        axes[a].push_back(lo + margin + (hi - lo - 2.0 * margin) * (k + 0.5) / counts[a]);
    }
  }
  std::vector<RVector> out;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.size();
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    RVector u(imm.dim);
    std::size_t rest = idx;
    for (int a = imm.dim - 1; a >= 0; --a) {
      u(a) = axes[a][rest % axes[a].size()];
      rest /= axes[a].size();
    }
    out.push_back(u);
  }
  return out;
}

const Check& VerificationReport::add_check(const std::string& name, double value, double tolerance,
                                           bool lower_bound) {
  Check c{name, value, tolerance, lower_bound, lower_bound ? (value >= tolerance) : (value <= tolerance)};
  checks.push_back(c);
  return checks.back();
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  auto num = [](double v) -> nlohmann::ordered_json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  auto opt = [&](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v) return nullptr;
    return num(*v);
  };
  j["max_omega"] = num(max_omega);
  j["quotient_residual"] = num(quotient_residual);
  j["quotient_stdev_rel"] = num(quotient_stdev_rel);
  j["first_integral_drift"] = num(first_integral_drift);
  j["delta_alpha_H"] = opt(delta_alpha_H);
  j["delta_alpha_error"] = opt(delta_alpha_error);
  j["beta_residual"] = opt(beta_residual);
  j["max_mean_curvature"] = opt(max_mean_curvature);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["value"] = num(c.value);
    e["tolerance"] = c.tolerance;
    e["bound"] = c.lower_bound ? ">=" : "<=";
    e["passed"] = c.passed;
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["passed"] = all_passed();
  return j.dump(2) + "\n";
}

}  // namespace hmin
