#pragma once

// Orbit spaces mu^{-1}(c)/G of the four cases: parametrization, induced
// metric, orbit volume and the Hsiang-Lawson metric V^2 g.
//
// Two radial coordinates appear. The free functions below take the radius r
// of the orbit parametrizations. MetricProfile works in the canonical
// coordinate x used by the solver:
//   CPnSO    x = phi, r = sin(phi),            x in (0, pi/2)
//   CPnTorus x = phi, r = sqrt(delta) sin(phi), x in (0, pi/2)
//   CnSO     x = r,                            x in (0, inf)
//   CnTorus  x = r,                            x in (sqrt(sigma), inf)
// For CPnTorus the canonical metric is normalized to d phi^2 + s^2 c^2 dtheta^2;
// the true induced metric is delta times that.

#include "hmin/ambient.hpp"

#include <utility>

namespace hmin {

inline constexpr double kDefaultCollar = 1e-9;

// Metric coefficients and orbit volume with first derivatives in x.
struct MetricJet {
  double g_xx, g_tt, V;
  double dg_xx, dg_tt, dV;
};

// Hsiang-Lawson coefficients E = V^2 g_xx, G = V^2 g_tt and derivatives.
struct HLJet {
  double E, G, dE, dG;
};

class MetricProfile {
 public:
  explicit MetricProfile(ActionCase ac, double collar = kDefaultCollar);

  const ActionCase& action_case() const { return case_; }
  double collar() const { return collar_; }
  // Open interval of regular points (x_max may be +inf).
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  bool bounded() const;
  // True when x is at least `collar` away from both endpoints.
  bool in_domain(double x) const;
  // Throws DomainError unless in_domain(x).
  void check(double x) const;

  std::pair<double, double> induced(double x) const;
  double volume(double x) const;
  MetricJet jet(double x) const;
  std::pair<double, double> hsiang_lawson(double x) const;
  HLJet hl_jet(double x) const;

  // A(x) with A' = 2 sqrt(g_xx g_tt), the area density of the quotient
  // Kaehler form in (x, theta). sin^2(phi) or r^2.
  double area_primitive(double x) const;
  double area_density(double x) const;

  double radius(double x) const;
  double from_radius(double r) const;

  // Constant relating the HL length of a quotient curve to the volume of
  // the swept submanifold in the ambient metric.
  double volume_scale() const;

  // orbit_param at the canonical coordinate.
  CVector orbit_point(double x, double theta) const;

 private:
  ActionCase case_;
  double collar_;
  double x_min_, x_max_;
};

CVector orbit_param(const ActionCase& ac, double r, double theta);

// Induced metric (g_rr, g_tt) of the quotient in the radius coordinate.
std::pair<double, double> induced_metric(const ActionCase& ac, double r);
double orbit_volume(const ActionCase& ac, double r);

// HL metric in the canonical coordinate (normalized form for CPnTorus).
std::pair<double, double> hsiang_lawson_metric(const ActionCase& ac, double x);
// HL metric in the radius coordinate.
std::pair<double, double> hsiang_lawson_metric_radius(const ActionCase& ac, double r);

// det of Phi_ij = r^2 + delta_ij (r^2 + c_i), the Gram matrix of the torus
// orbit frame. c.size() gives n.
double det_phi(const std::vector<double>& c, double r);
Eigen::MatrixXd phi_matrix(const std::vector<double>& c, double r);

// CnTorus: R = sqrt(r^2 prod(r^2 + c_k)) flattens the HL metric to dR^2 + R^2 dtheta^2.
double flat_radius(const ActionCase& ac, double r);
// Inverse of flat_radius on the solver domain.
double radius_from_flat(const ActionCase& ac, double R);

}  // namespace hmin
