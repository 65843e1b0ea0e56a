#pragma once

// Finite-difference geometry oracle. Works only from metric evaluators and
// immersion maps; nothing here touches the reduced Euler-Lagrange equation.

#include "hmin/immersion.hpp"
#include "hmin/reduction.hpp"

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hmin {

// max over samples and frame pairs of |omega(e_i, e_j)|.
double lagrangian_residual(const ImmersionCloud& cloud);

// A quotient curve s -> (x, theta), positions only.
using PlaneCurve = std::function<std::array<double, 2>(double)>;

struct CurvatureEstimate {
  double k = 0.0;      // Richardson value from steps h and h/2
  double error = 0.0;  // |k(h) - k(h/2)|
  double v2k = 0.0;    // V^2 k
  double speed = 0.0;  // HL speed |dc/ds|
};

// Geodesic curvature in the HL metric E dx^2 + G dtheta^2, signed against
// the normal n = (-sqrt(G/E) theta', sqrt(E/G) x') / |c'|. Curve and metric
// derivatives are central differences with step h. StepError when the two
// step sizes disagree by more than 10% of max(|k|, floor).
// The default step suits curves sampled from integrated trajectories, whose
// positions carry rounding noise near 1e-14.
CurvatureEstimate quotient_curvature(const MetricProfile& profile, const PlaneCurve& curve, double s, double h = 1e-3,
                                     double floor = 1e-4);
std::function<double(double)> quotient_curvature_fn(const MetricProfile& profile, PlaneCurve curve, double h = 1e-3);

struct QuotientSeries {
  std::vector<double> s, k, v2k;
  double mean = 0.0;
  double stdev = 0.0;
  double max_error = 0.0;  // largest step-halving error bar of k
  // max |V^2 k - K|
  double residual(double K) const;
};

// V^2 k on `count` points evenly spread over [s_lo, s_hi].
QuotientSeries quotient_series(const MetricProfile& profile, const PlaneCurve& curve, double s_lo, double s_hi,
                               int count, double h = 1e-3);

// max |d(beta)/ds_HL| with beta = -V^2 k, the one-dimensional form of
// delta_HL(V^4 H^ _| omega~) after the conformal change to the HL metric.
// The outer derivative uses steps 20 h and 10 h; StepError as above.
double beta_residual(const MetricProfile& profile, const PlaneCurve& curve, double s_lo, double s_hi, int count,
                    double h = 1e-3, double floor = 1e-3);

// Mean curvature vector of u -> F(u) in flat C^m from second-order central
// differences. DegenerateParamError on a rank-deficient first fundamental form.
CVector mean_curvature_fd(const ImmersionMap& F, const RVector& u0, double h = 1e-4);

struct MeanCurvature {
  CVector H;
  double error = 0.0;  // |H(h) - H(h/2)|
};
MeanCurvature mean_curvature_richardson(const ImmersionMap& F, const RVector& u0, double h = 1e-4);

struct DeltaAlpha {
  double max_abs = 0.0;     // max |delta alpha_H| (Richardson value)
  double error_bar = 0.0;   // max |D(h) - D(h/2)|
  double max_mean_curvature = 0.0;
  double min_mean_curvature = std::numeric_limits<double>::infinity();
  std::size_t points = 0;
};

// delta alpha_H = -(1/sqrt g) d_a (sqrt g g^{ab} alpha_b), alpha_b = omega(H, F_b),
// on the given interior points. H and F_a use step h_inner, the divergence
// uses h and h/2. PreconditionError when the frames of F are not Lagrangian
// (normalized |omega| > 1e-6); StepError when D(h) and D(h/2) disagree by
// more than 10% of max(|D|, floor).
DeltaAlpha delta_alpha_H_fd(const ImmersionMap& F, const std::vector<RVector>& grid, double h = 1e-3,
                            double h_inner = 1e-3, double floor = 1e-3);

// Interior grid of a parameter box: counts[a] cell-centred points per axis,
// kept `margin` away from non-periodic ends.
std::vector<RVector> interior_grid(const Immersion& imm, const std::vector<int>& counts, double margin = 0.0);

struct Check {
  std::string name;
  double value = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool lower_bound = false;  // pass when value >= tolerance instead of <=
  bool passed = false;
};

struct VerificationReport {
  double max_omega = std::numeric_limits<double>::quiet_NaN();
  double quotient_residual = std::numeric_limits<double>::quiet_NaN();
  double quotient_stdev_rel = std::numeric_limits<double>::quiet_NaN();
  double first_integral_drift = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> delta_alpha_H;
  std::optional<double> delta_alpha_error;
  std::optional<double> beta_residual;
  std::optional<double> max_mean_curvature;
  std::vector<Check> checks;

  // Records a comparison; passed is exactly value <= tol (or >= for lower bounds).
  const Check& add_check(const std::string& name, double value, double tolerance, bool lower_bound = false);
  bool all_passed() const;
  std::string to_json() const;
};

}  // namespace hmin
