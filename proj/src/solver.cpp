#include "hmin/solver.hpp"

#include "hmin/errors.hpp"
#include "hmin/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

namespace hmin {

namespace odeint = boost::numeric::odeint;
using std::numbers::pi;

namespace {

using Stepper = odeint::runge_kutta_fehlberg78<State>;

struct Rhs {
  const ReducedProblem* problem;
  void operator()(const State& y, State& dy, double /*theta*/) const {
    dy[0] = y[1];
    dy[1] = problem->el_acceleration(y[0], y[1]);
  }
};

bool finite(const State& s) { return std::isfinite(s[0]) && std::isfinite(s[1]); }

double boundary_distance(const MetricProfile& prof, double x) {
  double d = x - prof.x_min();
  if (prof.bounded()) d = std::min(d, prof.x_max() - x);
  return d;
}

double toms748(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi) {
  boost::uintmax_t iters = 200;
  auto res = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                              boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (res.first + res.second);
}

template <class F>
double gk_integrate(F&& f, double a, double b) {
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14, &err);
}

// d theta / dx along a branch moving away from a turning point, with the
// turning function value h supplied by the caller:
// mu sqrt(E) / (sqrt(G) sqrt(f)), with f = h (sqrt(G) + mu).
double theta_kernel(const ReducedProblem& p, double x, double h) {
  if (!(h > 0.0)) return 0.0;
  const HLJet j = p.profile().hl_jet(x);
  const double sg = std::sqrt(j.G);
  const double mu = sg - h;
  return mu * std::sqrt(j.E) / (sg * std::sqrt(h) * std::sqrt(sg + mu));
}

// h'(x) = G'/(2 sqrt G) - (K/2) A'.
double turning_slope(const ReducedProblem& p, double x) {
  const HLJet j = p.profile().hl_jet(x);
  return 0.5 * j.dG / std::sqrt(j.G) - 0.5 * p.K() * p.profile().area_density(x);
}

// h(root + offset) as the integral of h' from a root of h, with the offset
// passed exactly (root + offset may round). Subtracting sqrt(G) and mu
// directly loses all digits close to the root.
double turning_from_root(const ReducedProblem& p, double root, double offset) {
  const double mean = boost::math::quadrature::gauss<double, 30>::integrate(
      [&](double u) { return turning_slope(p, root + offset * u); }, 0.0, 1.0);
  return offset * mean;
}

struct Pass1 {
  std::vector<double> nodes;
  StopReason stop = StopReason::SpanEnd;
};

Pass1 adaptive_pass(const ReducedProblem& p, const State& y0, const IntegrateOptions& opt, double escape) {
  const MetricProfile& prof = p.profile();
  const double dir = opt.theta1 >= opt.theta0 ? 1.0 : -1.0;
  const Rhs rhs{&p};
  Stepper stepper;
  Pass1 out;
  out.nodes.push_back(opt.theta0);
  double t = opt.theta0;
  State y = y0;
  double h = std::min(opt.max_step, 1e-3);
  int turn_sign = 0;
  while (dir * (opt.theta1 - t) > 0.0) {
    const double remaining = dir * (opt.theta1 - t);
    const bool last = h >= remaining;
    const double step = last ? remaining : h;
    State next{}, err{};
    bool ok = true;
    double errn = 0.0;
    try {
      stepper.do_step(rhs, y, t, next, dir * step, err);
      for (int i = 0; i < 2; ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(next[i]));
        errn = std::max(errn, std::abs(err[i]) / sc);
      }
      ok = finite(next) && std::isfinite(errn) && prof.in_domain(next[0]);
    } catch (const DomainError&) {
      ok = false;
    } catch (const NumericalError&) {
      ok = false;
    }
    if (!ok || errn > 1.0) {
      h = step * (ok ? std::max(0.2, 0.9 * std::pow(errn, -1.0 / 8.0)) : 0.25);
      if (h < 1e-13 * (1.0 + std::abs(t))) {
        if (boundary_distance(prof, y[0]) < 1e3 * opt.approach_margin) {
          out.stop = StopReason::DomainApproach;
        } else if (std::abs(y[1]) > 1e4 * (1.0 + std::abs(y[0]))) {
          out.stop = StopReason::SlopeBlowup;
        } else {
          char buf[128];
          std::snprintf(buf, sizeof buf, "step size underflow at theta = %.17g, x = %.17g", t, y[0]);
          throw StiffnessError(buf);
        }
        break;
      }
      continue;
    }
    t = last ? opt.theta1 : t + dir * step;
    y = next;
    out.nodes.push_back(t);
    h = std::min(opt.max_step, step * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(errn, 1e-30), -1.0 / 8.0))));

    if (escape > 0.0 && y[0] >= escape) {
      out.stop = StopReason::Escape;
      break;
    }
    if (boundary_distance(prof, y[0]) < opt.approach_margin) {
      out.stop = StopReason::DomainApproach;
      break;
    }
    if (std::abs(y[1]) > opt.slope_limit) {
      out.stop = StopReason::SlopeBlowup;
      break;
    }
    if (opt.stop_on_turn) {
      if (turn_sign == 0) {
        if (y[1] != 0.0) turn_sign = y[1] > 0.0 ? 1 : -1;
      } else if (turn_sign * y[1] < 0.0) {
        out.stop = StopReason::Event;
        break;
      }
    }
  }
  return out;
}

// Re-integrates across the nodes with fixed substeps; truncates at a failure.
std::vector<State> dense_pass(const ReducedProblem& p, const State& y0, std::vector<double>& nodes, int m) {
  const Rhs rhs{&p};
  odeint::runge_kutta_fehlberg78<State> stepper;
  std::vector<State> states{y0};
  states.reserve(nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    State y = states.back();
    const double hc = (nodes[i + 1] - nodes[i]) / m;
    double t = nodes[i];
    try {
      for (int k = 0; k < m; ++k) {
        stepper.do_step(rhs, y, t, hc);
        t += hc;
      }
    } catch (const Error&) {
      nodes.resize(i + 1);
      break;
    }
    if (!finite(y)) {
      nodes.resize(i + 1);
      break;
    }
    states.push_back(y);
  }
  return states;
}

std::optional<double> forward_asymptote(const ReducedProblem& p, const InitialCondition& ic);

double escape_integral(const ReducedProblem& p, double r0) {
  // [r0, 2 r0] with r = r0 + L s^2, then [2 r0, inf) with u = 1/r.
  const double L = r0;
  const double near = gk_integrate(
      [&](double s) {
        if (s <= 0.0) return 0.0;
        const double x = r0 + L * s * s;
        return theta_kernel(p, x, turning_from_root(p, r0, L * s * s)) * 2.0 * L * s;
      },
      0.0, 1.0);
  const double umax = 1.0 / (r0 + L);
  const double tail = gk_integrate(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        return theta_kernel(p, 1.0 / u, p.turning_function(1.0 / u)) / (u * u);
      },
      0.0, umax);
  return near + tail;
}

// Theta advance from the simple root r0 up to r1 (regular at r1).
double root_to_point_integral(const ReducedProblem& p, double r0, double r1) {
  const double L = r1 - r0;
  return std::abs(gk_integrate(
      [&](double s) {
        if (s <= 0.0) return 0.0;
        const double x = r0 + L * s * s;
        return theta_kernel(p, x, turning_from_root(p, r0, L * s * s)) * 2.0 * L * s;
      },
      0.0, 1.0));
}

std::optional<double> forward_asymptote(const ReducedProblem& p, const InitialCondition& ic) {
  try {
    if (ic.b == 0.0) {
      if (!(p.el_acceleration(ic.a, 0.0) > 0.0) || !p.escape_monotone(ic.a)) return std::nullopt;
      return escape_integral(p, ic.a);
    }
    const double rmin = find_turning_root(p, ic.a, -1);
    if (rmin == ic.a || !p.escape_monotone(rmin)) return std::nullopt;
    const double tail = escape_integral(p, rmin);
    const double inner = root_to_point_integral(p, rmin, ic.a);
    return ic.b > 0.0 ? tail - inner : tail + inner;
  } catch (const Error&) {
    return std::nullopt;
  }
}

Classification classify(const ReducedProblem& p, const InitialCondition& ic, StopReason stop, double dir,
                        double theta0, std::int64_t q_max) {
  Classification c;
  const double acc = p.el_acceleration(ic.a, ic.b);
  if (std::abs(ic.b) + std::abs(acc) < 1e-12) {
    c.kind = Classification::Kind::Constant;
    return c;
  }
  if (stop == StopReason::DomainApproach || stop == StopReason::SlopeBlowup) {
    c.kind = Classification::Kind::Truncated;
    return c;
  }
  if (p.action_case().projective()) {
    c.kind = Classification::Kind::Complete;
    try {
      const double lo = find_turning_root(p, ic.a, -1);
      const double hi = find_turning_root(p, ic.a, +1);
      if (lo >= hi) return c;
      c.omega = half_period_between(p, lo, hi);
      const double ratio = c.omega / pi;
      const Rational r = best_rational(ratio, q_max);
      if (std::abs(ratio - r.value()) <= default_rational_tol(r.q)) {
        c.kind = Classification::Kind::Closed;
        c.pq = r;
      }
    } catch (const Error&) {
    }
    return c;
  }
  InitialCondition fwd = ic;
  fwd.b = dir * ic.b;
  const auto tm = forward_asymptote(p, fwd);
  if (tm) {
    c.kind = Classification::Kind::Blowup;
    c.theta_max = theta0 + dir * *tm;
  } else {
    c.kind = stop == StopReason::Escape ? Classification::Kind::Blowup : Classification::Kind::Truncated;
  }
  return c;
}

}  // namespace

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::SpanEnd:
      return "span_end";
    case StopReason::Escape:
      return "escape";
    case StopReason::DomainApproach:
      return "domain_approach";
    case StopReason::SlopeBlowup:
      return "slope_blowup";
    case StopReason::Event:
      return "event";
  }
  return "?";
}

std::string_view to_string(Classification::Kind k) {
  switch (k) {
    case Classification::Kind::Constant:
      return "Constant";
    case Classification::Kind::Closed:
      return "Closed";
    case Classification::Kind::Complete:
      return "Complete";
    case Classification::Kind::Blowup:
      return "Blowup";
    case Classification::Kind::Truncated:
      return "Truncated";
  }
  return "?";
}

std::string describe(const Classification& c) {
  char buf[96];
  switch (c.kind) {
    case Classification::Kind::Closed:
      std::snprintf(buf, sizeof buf, "Closed(%lld,%lld)", static_cast<long long>(c.pq.p),
                    static_cast<long long>(c.pq.q));
      return buf;
    case Classification::Kind::Blowup:
      std::snprintf(buf, sizeof buf, "Blowup(%.17g)", c.theta_max);
      return buf;
    default:
      return std::string(to_string(c.kind));
  }
}

DenseCurve::DenseCurve(ReducedProblem problem, std::vector<double> nodes, std::vector<State> states,
                       int substeps)
    : problem_(std::move(problem)), nodes_(std::move(nodes)), states_(std::move(states)), substeps_(substeps) {
  if (nodes_.empty() || nodes_.size() != states_.size()) throw InvalidInput("dense curve needs matching nodes");
  dir_ = nodes_.size() > 1 && nodes_.back() < nodes_.front() ? -1.0 : 1.0;
}

State DenseCurve::operator()(double theta) const {
  const double k = dir_ * theta;
  const double k0 = dir_ * nodes_.front(), k1 = dir_ * nodes_.back();
  const double slack = 1e-12 * (1.0 + std::abs(theta));
  if (!(k >= k0 - slack && k <= k1 + slack)) throw DomainError("theta outside the integrated span");
  if (nodes_.size() == 1) return states_.front();
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), theta,
                             [&](double v, double node) { return dir_ * v < dir_ * node; });
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - nodes_.begin()) - 1));
  i = std::min(i, nodes_.size() - 2);
  if (theta == nodes_[i]) return states_[i];
  if (theta == nodes_[i + 1]) return states_[i + 1];
  const Rhs rhs{&problem_};
  odeint::runge_kutta_fehlberg78<State> stepper;
  State y = states_[i];
  const double hc = (theta - nodes_[i]) / substeps_;
  double t = nodes_[i];
  for (int s = 0; s < substeps_; ++s) {
    stepper.do_step(rhs, y, t, hc);
    t += hc;
  }
  return y;
}

double drift_budget(double tol, double lambda) { return 100.0 * tol * (1.0 + std::abs(lambda)); }

Trajectory integrate(const ReducedProblem& problem, const InitialCondition& ic, double theta_span, double tol) {
  IntegrateOptions opt;
  opt.theta1 = theta_span;
  opt.rtol = tol;
  return integrate(problem, ic, opt);
}

Trajectory integrate(const ReducedProblem& base, const InitialCondition& ic, const IntegrateOptions& opt) {
  if (!(opt.rtol >= 1e-15 && opt.rtol <= 1e-2) || !(opt.atol > 0.0)) throw InvalidInput("bad tolerance");
  if (!(opt.max_step > 0.0) || opt.substeps < 1) throw InvalidInput("bad step options");
  if (!std::isfinite(opt.theta0) || !std::isfinite(opt.theta1)) throw InvalidInput("theta span must be finite");
  ReducedProblem p = base.with_initial(ic);
  const double lam = p.lambda();
  if (opt.require_admissible) {
    const Admissibility adm = p.admissibility();
    if (!adm.admissible) throw PreconditionError("forbidden lambda: " + adm.reason);
  }
  double escape = 0.0;
  if (!p.action_case().projective()) escape = opt.escape_radius > 0.0 ? opt.escape_radius : 20.0 * std::max(ic.a, 1.0);

  const State y0{ic.a, ic.b};
  Pass1 pass = adaptive_pass(p, y0, opt, escape);
  std::vector<double> nodes = std::move(pass.nodes);
  std::vector<State> states = dense_pass(p, y0, nodes, opt.substeps);

  Trajectory tr(p, ic);
  const double dir = opt.theta1 >= opt.theta0 ? 1.0 : -1.0;
  tr.lambda = lam;
  tr.tol = opt.rtol;
  tr.stop = pass.stop;
  tr.drift_budget = drift_budget(opt.rtol, lam);
  const std::size_t N = nodes.size();
  tr.theta.resize(N);
  tr.x.resize(N);
  tr.xp.resize(N);
  tr.drift.resize(N);
  double bmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t j = dir > 0 ? k : N - 1 - k;
    tr.theta[k] = nodes[j];
    tr.x[k] = states[j][0];
    tr.xp[k] = states[j][1];
    tr.drift[k] = std::abs(p.lambda_at(states[j][0], states[j][1]) - lam);
    tr.drift_max = std::max(tr.drift_max, tr.drift[k]);
    if (p.action_case().projective()) {
      const double s = std::sin(states[j][0]), c = std::cos(states[j][0]);
      bmin = std::min(bmin, s * s * c * c);
    } else {
      bmin = std::min(bmin, states[j][0] - p.profile().x_min());
    }
  }
  tr.boundary_measure = bmin;
  if (opt.enforce_drift && tr.drift_max > tr.drift_budget) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "first-integral drift %.3g exceeds budget %.3g", tr.drift_max, tr.drift_budget);
    throw DriftError(buf);
  }
  if (opt.classify) tr.classification = classify(p, ic, tr.stop, dir, opt.theta0, opt.q_max);
  auto dense = std::make_shared<const DenseCurve>(p, std::move(nodes), std::move(states), opt.substeps);
  tr.sampler = [dense](double th) { return (*dense)(th); };
  return tr;
}

double find_turning_root(const ReducedProblem& p, double x0, int dir) {
  if (dir != 1 && dir != -1) throw InvalidInput("direction must be +1 or -1");
  const MetricProfile& prof = p.profile();
  const double guard = 2.0 * prof.collar();
  double D = dir > 0 ? (prof.bounded() ? prof.x_max() - guard - x0 : 1e6 * std::max(1.0, x0))
                     : x0 - prof.x_min() - guard;
  if (!(D > 0.0)) throw BracketError("no room for a turning point");
  auto h = [&](double x) { return p.turning_function(x); };
  constexpr int kGrid = 2000;
  double prev_x = x0;
  double prev_h = h(x0);
  for (int k = 0; k <= kGrid; ++k) {
    const double x = x0 + dir * D * std::pow(10.0, -8.0 + 8.0 * k / kGrid);
    if (p.mu(x) <= 0.0) throw BracketError("mu vanishes before a turning point is reached");
    const double hx = h(x);
    if (hx < 0.0) {
      if (k == 0) return x0;  // partner closer than the grid resolution
      if (prev_h <= 0.0) return prev_x;
      return toms748(h, std::min(prev_x, x), std::max(prev_x, x), dir > 0 ? prev_h : hx, dir > 0 ? hx : prev_h);
    }
    prev_x = x;
    prev_h = hx;
  }
  throw BracketError("turning function keeps its sign up to the domain boundary");
}

namespace {

// Polishes a partner root of a turning start a (where h vanishes exactly by
// the choice of lambda) as a zero of the integral of h' from a.
double polish_partner(const ReducedProblem& p, double a, double guess) {
  if (guess == a) return a;
  auto H = [&](double x) { return turning_from_root(p, a, x - a); };
  const double span = std::abs(guess - a);
  const MetricProfile& prof = p.profile();
  for (double w = 1e-9 * span; w < 0.5 * span; w *= 4.0) {
    double lo = guess - w, hi = guess + w;
    if (!prof.in_domain(lo) || !prof.in_domain(hi)) break;
    const double flo = H(lo), fhi = H(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) != (fhi < 0.0)) return toms748(H, lo, hi, flo, fhi);
  }
  return guess;
}

}  // namespace

double turning_radius(const ReducedProblem& problem, double a) {
  const ReducedProblem p = problem.with_initial({a, 0.0});
  const double acc = p.el_acceleration(a, 0.0);
  if (std::abs(acc) < 1e-10) return a;
  return polish_partner(p, a, find_turning_root(p, a, acc < 0.0 ? -1 : 1));
}

double half_period_between(const ReducedProblem& p, double lo, double hi) {
  if (!(lo < hi)) throw InvalidInput("half period needs lo < hi");
  const double L = hi - lo;
  // x = lo + L sin^2 s, measured from the nearer endpoint.
  return gk_integrate(
      [&](double s) {
        const double sn = std::sin(s), cs = std::cos(s);
        if (sn <= 0.0 || cs <= 0.0) return 0.0;
        double x, h;
        if (s < 0.25 * pi) {
          x = lo + L * sn * sn;
          h = turning_from_root(p, lo, L * sn * sn);
        } else {
          x = hi - L * cs * cs;
          h = turning_from_root(p, hi, -L * cs * cs);
        }
        return theta_kernel(p, x, h) * 2.0 * L * sn * cs;
      },
      0.0, 0.5 * pi);
}

double period_omega(const ReducedProblem& problem, double a) {
  const ReducedProblem p = problem.with_initial({a, 0.0});
  const Admissibility adm = p.admissibility();
  if (!adm.admissible) throw PreconditionError("forbidden lambda: " + adm.reason);
  const double acc = p.el_acceleration(a, 0.0);
  if (std::abs(acc) < 1e-10) throw DegenerateTurningPoint("start is a constant solution");
  const double partner = polish_partner(p, a, find_turning_root(p, a, acc < 0.0 ? -1 : 1));
  if (std::abs(partner - a) < 1e-7 * std::max(1.0, std::abs(a)))
    throw DegenerateTurningPoint("turning points nearly coincide");
  // Simple-zero check on the partner through the slope of h.
  const double dx = 1e-6 * std::abs(partner - a);
  const double slope = (p.turning_function(partner + dx) - p.turning_function(partner - dx)) / (2.0 * dx);
  if (!(std::abs(slope) > 1e-12)) throw DegenerateTurningPoint("partner turning point is a double root");
  return half_period_between(p, std::min(a, partner), std::max(a, partner));
}

double shoot_half_period(const ReducedProblem& problem, double a, double tol) {
  IntegrateOptions opt;
  opt.theta1 = 1e3;
  opt.rtol = tol;
  opt.atol = 1e-2 * tol;
  opt.enforce_drift = false;
  opt.classify = false;
  opt.stop_on_turn = true;
  const Trajectory tr = integrate(problem, {a, 0.0}, opt);
  if (tr.stop != StopReason::Event) throw NumericalError("no turning point reached while shooting");
  const std::size_t n = tr.theta.size();
  const double t1 = tr.theta[n - 1], t0 = tr.theta[n - 2];
  return toms748([&](double th) { return tr.at(th)[1]; }, t0, t1, tr.xp[n - 2], tr.xp[n - 1]);
}

double theta_max(const ReducedProblem& problem, double a) {
  if (problem.action_case().projective()) throw PreconditionError("theta_max is defined for the C^{n+1} cases");
  const ReducedProblem p = problem.with_initial({a, 0.0});
  const Admissibility adm = p.admissibility();
  if (!adm.admissible) throw PreconditionError("forbidden lambda: " + adm.reason);
  if (!(p.el_acceleration(a, 0.0) > 0.0) || !p.escape_monotone(a))
    throw PreconditionError("start is not in the monotone escape regime");
  return escape_integral(p, a);
}

double theta_at_radius(const ReducedProblem& problem, double a, double R, double tol) {
  if (!(R > a)) throw InvalidInput("target radius must exceed a");
  IntegrateOptions opt;
  opt.theta1 = 1e3;
  opt.rtol = tol;
  opt.atol = 1e-2 * tol;
  opt.enforce_drift = false;
  opt.classify = false;
  opt.escape_radius = R;
  const Trajectory tr = integrate(problem, {a, 0.0}, opt);
  if (tr.stop != StopReason::Escape) throw NumericalError("target radius not reached");
  const std::size_t n = tr.theta.size();
  const double t1 = tr.theta[n - 1], t0 = tr.theta[n - 2];
  return toms748([&](double th) { return tr.at(th)[0] - R; }, t0, t1, tr.x[n - 2] - R, tr.x[n - 1] - R);
}

Trajectory extend_by_reflection(const Trajectory& traj) {
  if (traj.ic.b != 0.0 || traj.theta.front() != 0.0)
    throw PreconditionError("reflection needs a turning-point start at theta = 0");
  Trajectory out = traj;
  const std::size_t n = traj.theta.size();
  out.theta.clear();
  out.x.clear();
  out.xp.clear();
  out.drift.clear();
  for (std::size_t k = n - 1; k >= 1; --k) {
    out.theta.push_back(-traj.theta[k]);
    out.x.push_back(traj.x[k]);
    out.xp.push_back(-traj.xp[k]);
    out.drift.push_back(traj.drift[k]);
  }
  out.theta.insert(out.theta.end(), traj.theta.begin(), traj.theta.end());
  out.x.insert(out.x.end(), traj.x.begin(), traj.x.end());
  out.xp.insert(out.xp.end(), traj.xp.begin(), traj.xp.end());
  out.drift.insert(out.drift.end(), traj.drift.begin(), traj.drift.end());
  CurveSampler base = traj.sampler;
  out.sampler = [base](double th) {
    if (th >= 0.0) return base(th);
    const State s = base(-th);
    return State{s[0], -s[1]};
  };
  return out;
}

Trajectory extend_periodic(const Trajectory& traj, double omega, int copies) {
  if (traj.ic.b != 0.0 || traj.theta.front() != 0.0)
    throw PreconditionError("periodic extension needs a turning-point start at theta = 0");
  if (!(omega > 0.0) || traj.theta.back() < omega * (1.0 - 1e-12))
    throw PreconditionError("trajectory does not cover a half period");
  if (copies < 1) throw InvalidInput("copies must be >= 1");
  const double T = 2.0 * omega;
  CurveSampler base = traj.sampler;
  auto sampler = [base, omega, T](double th) {
    double r = th - T * std::round(th / T);
    r = std::clamp(r, -omega, omega);
    if (r >= 0.0) return base(r);
    const State s = base(-r);
    return State{s[0], -s[1]};
  };
  std::vector<double> one;
  for (double t : traj.theta)
    if (t <= omega) one.push_back(t);
  const std::size_t m = one.size();
  for (std::size_t k = m; k-- > 0;)
    if (T - one[k] > one.back()) one.push_back(T - one[k]);
  Trajectory out = traj;
  out.theta.clear();
  out.x.clear();
  out.xp.clear();
  out.drift.clear();
  for (int c = -copies; c < copies; ++c) {
    for (std::size_t k = 0; k < one.size(); ++k) {
      if (c > -copies && k == 0) continue;
      const double th = c * T + one[k];
      const State s = sampler(th);
      out.theta.push_back(th);
      out.x.push_back(s[0]);
      out.xp.push_back(s[1]);
      out.drift.push_back(std::abs(traj.problem.lambda_at(s[0], s[1]) - traj.lambda));
    }
  }
  const double end = copies * T;
  if (out.theta.back() < end) {
    const State s = sampler(end);
    out.theta.push_back(end);
    out.x.push_back(s[0]);
    out.xp.push_back(s[1]);
    out.drift.push_back(std::abs(traj.problem.lambda_at(s[0], s[1]) - traj.lambda));
  }
  out.drift_max = *std::max_element(out.drift.begin(), out.drift.end());
  out.sampler = sampler;
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw InvalidInput("grid needs at least two points");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}

std::vector<ScanRow> scan(const ReducedProblem& problem, const std::vector<double>& a_grid, std::int64_t q_max,
                          unsigned jobs) {
  std::vector<ScanRow> rows(a_grid.size());
  parallel_for(a_grid.size(), jobs, [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.a = a_grid[i];
    try {
      const ReducedProblem p = problem.with_initial({row.a, 0.0});
      row.lambda = p.lambda();
      if (!p.admissibility().admissible) {
        row.status = "forbidden";
        return;
      }
      row.omega = period_omega(problem, row.a);
      row.ratio = row.omega / pi;
      row.pq = best_rational(row.ratio, q_max);
      row.rational_error = std::abs(row.ratio - row.pq.value());
    } catch (const DegenerateTurningPoint&) {
      row.status = "degenerate";
    } catch (const NumericalError& e) {
      row.status = std::string("numerical: ") + e.what();
    } catch (const DomainError& e) {
      row.status = std::string("domain: ") + e.what();
    } catch (const PreconditionError&) {
      row.status = "forbidden";
    }
  });
  return rows;
}

ClosedSearchResult closed_search(const ReducedProblem& problem, const ClosedSearchOptions& opt) {
  if (opt.count < 2) throw InvalidInput("closed search needs a grid of at least two points");
  if (opt.q_max < 1) throw InvalidInput("q_max must be >= 1");
  ClosedSearchResult res;
  res.grid = scan(problem, linspace(opt.a_min, opt.a_max, opt.count), opt.q_max, opt.jobs);
  bool any = false;
  for (const ScanRow& r : res.grid) {
    if (r.status != "ok") continue;
    any = true;
    res.ratio_min = std::isnan(res.ratio_min) ? r.ratio : std::min(res.ratio_min, r.ratio);
    res.ratio_max = std::isnan(res.ratio_max) ? r.ratio : std::max(res.ratio_max, r.ratio);
  }
  if (!any) throw PreconditionError("no admissible, non-degenerate point on the a-grid");
  auto tol_rat = [&](const Rational& r) { return opt.tol_rat_scale * double(r.q) * double(r.q); };

  const std::size_t n = res.grid.size();
  std::vector<std::optional<ClosedHit>> direct(n), bracketed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ScanRow& r = res.grid[i];
    if (r.status == "ok" && r.rational_error <= tol_rat(r.pq))
      direct[i] = ClosedHit{r.a, r.lambda, r.omega, r.pq, r.rational_error};
  }
  parallel_for(n - 1, opt.jobs, [&](std::size_t i) {
    const ScanRow& u = res.grid[i];
    const ScanRow& v = res.grid[i + 1];
    if (u.status != "ok" || v.status != "ok") return;
    const auto r = simplest_rational_between(u.ratio, v.ratio, opt.q_max);
    if (!r) return;
    const double target = r->value();
    try {
      auto g = [&](double a) { return period_omega(problem, a) / pi - target; };
      const double a = toms748(g, u.a, v.a, u.ratio - target, v.ratio - target);
      const double om = period_omega(problem, a);
      ClosedHit hit{a, problem.with_initial({a, 0.0}).lambda(), om, *r, std::abs(om / pi - target)};
      if (hit.rational_error <= tol_rat(*r)) bracketed[i] = hit;
    } catch (const NumericalError&) {
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (direct[i]) res.hits.push_back(*direct[i]);
    if (bracketed[i]) res.hits.push_back(*bracketed[i]);
  }
  if (opt.verify_closure) {
    parallel_for(res.hits.size(), opt.jobs, [&](std::size_t i) {
      ClosedHit& h = res.hits[i];
      try {
        h.closure_residual = closure_residual(problem, h.a, h.pq, opt.closure_tol);
      } catch (const NumericalError&) {
        h.closure_residual = std::numeric_limits<double>::infinity();
      }
    });
    for (auto& h : res.hits)
      for (auto& row : res.grid)
        if (row.a == h.a) row.closure_residual = h.closure_residual;
  }
  return res;
}

double closure_residual(const ReducedProblem& problem, double a, const Rational& pq, double tol) {
  if (pq.q < 1 || pq.p < 1) throw InvalidInput("closure needs p, q >= 1");
  const double omega = period_omega(problem, a);
  const double T = 2.0 * pi * static_cast<double>(pq.p);
  IntegrateOptions opt;
  opt.theta1 = T + 2.0 * omega;
  opt.rtol = tol;
  opt.atol = 1e-2 * tol;
  opt.enforce_drift = false;
  opt.classify = false;
  const Trajectory tr = integrate(problem, {a, 0.0}, opt);
  if (tr.stop != StopReason::SpanEnd) throw NumericalError("closure integration stopped early");
  double worst = 0.0;
  constexpr int kSamples = 64;
  for (int k = 0; k <= kSamples; ++k) {
    const double th = 2.0 * omega * k / kSamples;
    worst = std::max(worst, std::abs(tr.at(th + T)[0] - tr.at(th)[0]));
  }
  return worst;
}

}  // namespace hmin
