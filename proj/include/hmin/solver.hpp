#pragma once

// Integration of the reduced Euler-Lagrange equation, turning points,
// period and asymptote quadratures, classification and the closed-curve
// search over initial heights.

#include "hmin/rational.hpp"
#include "hmin/reduced_ode.hpp"

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hmin {

using State = std::array<double, 2>;  // (x, x')

enum class StopReason { SpanEnd, Escape, DomainApproach, SlopeBlowup, Event };
std::string_view to_string(StopReason r);

struct Classification {
  enum class Kind { Constant, Closed, Complete, Blowup, Truncated };
  Kind kind = Kind::Truncated;
  Rational pq{};  // Closed only
  double omega = std::numeric_limits<double>::quiet_NaN();      // half period (CPn cases)
  double theta_max = std::numeric_limits<double>::quiet_NaN();  // forward asymptote (Blowup)
};
std::string_view to_string(Classification::Kind k);
std::string describe(const Classification& c);

struct IntegrateOptions {
  double theta0 = 0.0;
  double theta1 = 20.0;  // may be < theta0 for backward integration
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;
  // Cn cases: stop with Escape once x >= escape_radius (0 picks 20 max(a, 1)).
  double escape_radius = 0.0;
  // Stop with DomainApproach when x comes this close to a domain endpoint.
  double approach_margin = 1e-6;
  double slope_limit = 1e10;
  bool enforce_drift = true;
  bool require_admissible = true;
  bool classify = true;
  // Stop (Event) at the first sign change of x' after leaving the start.
  bool stop_on_turn = false;
  int substeps = 8;
  std::int64_t q_max = 64;
};

// Dense evaluator over the accepted step nodes. Between two nodes the state
// is obtained by `substeps` fixed RK78 steps from the lower node, which makes
// it a smooth function of theta inside every cell and continuous across nodes.
class DenseCurve {
 public:
  DenseCurve(ReducedProblem problem, std::vector<double> nodes, std::vector<State> states, int substeps);
  State operator()(double theta) const;
  double theta_first() const { return nodes_.front(); }
  double theta_last() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<State>& states() const { return states_; }

 private:
  ReducedProblem problem_;
  std::vector<double> nodes_;
  std::vector<State> states_;
  double dir_;
  int substeps_;
};

using CurveSampler = std::function<State(double)>;

struct Trajectory {
  Trajectory(ReducedProblem p, InitialCondition start) : problem(std::move(p)), ic(start) {}

  ReducedProblem problem;  // lambda and initial condition set
  InitialCondition ic;
  std::vector<double> theta;  // strictly increasing
  std::vector<double> x, xp, drift;
  double lambda = 0.0;
  double drift_max = 0.0;
  double drift_budget = 0.0;
  double tol = 0.0;
  StopReason stop = StopReason::SpanEnd;
  Classification classification;
  // CPn: inf sin^2 x cos^2 x over the grid. Cn: min distance to the lower end.
  double boundary_measure = 0.0;
  CurveSampler sampler;

  State at(double th) const { return sampler(th); }
  double theta_begin() const { return theta.front(); }
  double theta_end() const { return theta.back(); }
};

double drift_budget(double tol, double lambda);

// Forward integration on [0, theta_span] at relative tolerance tol.
Trajectory integrate(const ReducedProblem& problem, const InitialCondition& ic, double theta_span,
                     double tol = 1e-10);
Trajectory integrate(const ReducedProblem& problem, const InitialCondition& ic, const IntegrateOptions& opt);

// First zero of the turning function met when moving from x0 in direction dir
// (+1/-1). BracketError when none exists inside the domain.
double find_turning_root(const ReducedProblem& problem_with_lambda, double x0, int dir);

// Partner turning point of a turning start at a: the largest root below a
// when a is a maximum, the smallest above a when a is a minimum. Returns a
// itself when a is (numerically) a constant solution.
double turning_radius(const ReducedProblem& problem, double a);

// Theta advance between consecutive turning points lo < hi (both simple
// zeros of the radicand), by quadrature.
double half_period_between(const ReducedProblem& problem_with_lambda, double lo, double hi);

// Half period of the oscillation through the turning start (a, 0).
// DegenerateTurningPoint when the two turning points (nearly) coincide.
double period_omega(const ReducedProblem& problem, double a);

// Half period measured by integrating from (a, 0) to the next zero of x'.
double shoot_half_period(const ReducedProblem& problem, double a, double tol = 1e-12);

// Cn cases: asymptote angle of the monotone escape from the turning start (a, 0).
double theta_max(const ReducedProblem& problem, double a);
// Theta at which the escape from (a, 0) reaches radius R, by integration.
double theta_at_radius(const ReducedProblem& problem, double a, double R, double tol = 1e-12);

// Even extension theta -> -theta of a turning-start trajectory beginning at 0.
Trajectory extend_by_reflection(const Trajectory& traj);
// Periodic extension with period 2 omega from a turning-start trajectory that
// covers [0, omega]; the result covers [-copies*2*omega, copies*2*omega].
Trajectory extend_periodic(const Trajectory& traj, double omega, int copies);

struct ScanRow {
  double a = 0.0;
  double lambda = 0.0;
  double omega = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();  // omega/pi
  Rational pq{};
  double rational_error = std::numeric_limits<double>::quiet_NaN();
  double closure_residual = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

// Omega_a over the grid; non-fatal failures are recorded in `status`.
std::vector<ScanRow> scan(const ReducedProblem& problem, const std::vector<double>& a_grid,
                          std::int64_t q_max = 64, unsigned jobs = 1);

struct ClosedSearchOptions {
  double a_min = 0.0;
  double a_max = 0.0;
  int count = 200;
  std::int64_t q_max = 64;
  double tol_rat_scale = 1e-9;  // tol_rat = scale * q^2
  bool verify_closure = true;
  double closure_tol = 1e-10;   // integrator tolerance for the closure check
  unsigned jobs = 1;
};

struct ClosedHit {
  double a = 0.0;
  double lambda = 0.0;
  double omega = 0.0;
  Rational pq{};
  double rational_error = 0.0;
  double closure_residual = std::numeric_limits<double>::quiet_NaN();
};

struct ClosedSearchResult {
  std::vector<ScanRow> grid;
  std::vector<ClosedHit> hits;
  double ratio_min = std::numeric_limits<double>::quiet_NaN();
  double ratio_max = std::numeric_limits<double>::quiet_NaN();
};

std::vector<double> linspace(double lo, double hi, int count);
ClosedSearchResult closed_search(const ReducedProblem& problem, const ClosedSearchOptions& opt);

// max over theta in [0, 2 omega] of |x(theta + 2 pi p) - x(theta)| for the
// turning start (a, 0) with omega/pi = p/q.
double closure_residual(const ReducedProblem& problem, double a, const Rational& pq, double tol = 1e-10);

}  // namespace hmin
