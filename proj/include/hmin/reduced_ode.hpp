#pragma once

// Reduced H-minimal problem on the orbit space: the curve x = x(theta) is a
// critical point of
//   J = int sqrt(E x'^2 + G) - (K/2) A(x) dtheta
// with E, G the Hsiang-Lawson coefficients and A the area primitive of the
// quotient Kaehler form. The Hamiltonian is H = -G/W + K A/2, W = sqrt(E x'^2 + G),
// and lambda = -H, so along a solution G/W = mu(x) := lambda + K A(x)/2.

#include "hmin/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hmin {

struct InitialCondition {
  double a = 0.0;
  double b = 0.0;
};

struct Admissibility {
  bool admissible = true;
  std::string reason;  // empty when admissible
};

class ReducedProblem {
 public:
  // Throws InvalidInput for K = 0 or non-finite K.
  ReducedProblem(ActionCase ac, double K, double collar = kDefaultCollar);

  const ActionCase& action_case() const { return profile_.action_case(); }
  const MetricProfile& profile() const { return profile_; }
  double K() const { return K_; }

  bool has_lambda() const { return lambda_.has_value(); }
  // StateError when unset.
  double lambda() const;
  const std::optional<InitialCondition>& initial() const { return ic_; }

  // Validates the initial condition, stores it and lambda, returns lambda.
  double lambda_from_ic(const InitialCondition& ic);
  ReducedProblem with_initial(const InitialCondition& ic) const;
  // Sets lambda directly (no stored initial condition).
  ReducedProblem with_lambda(double lambda) const;

  void validate_initial(const InitialCondition& ic) const;

  double lagrangian_density(double x, double xp) const;
  double momentum(double x, double xp) const;
  // Inverse Legendre map; NumericalDomainError when p^2 >= E(x).
  double velocity_from_momentum(double x, double p) const;
  // H(x, p); NumericalDomainError when p^2 > E(x).
  double hamiltonian(double x, double p) const;
  double first_integral(double x, double xp) const;
  // lambda read off the conserved form: G/W - K A/2.
  double lambda_at(double x, double xp) const;

  // Second derivative from the Euler-Lagrange equation. The two SO cases use
  // their explicit forms; the torus cases use the generic formula.
  double el_acceleration(double x, double xp) const;
  double el_acceleration_generic(double x, double xp) const;
  // Residual of the case's Euler-Lagrange equation for a given (x, x', x'').
  // For CnSO this is the explicit radial form
  //   (-r r'' + 2 r'^2 + r^2)/(r^2 + r'^2)^{3/2} + n/sqrt(r^2 + r'^2) - K/r^n.
  double el_residual(double x, double xp, double xpp) const;

  // mu(x) = lambda + K A(x)/2; requires lambda.
  double mu(double x) const;
  // f(x) = G(x) - mu(x)^2; the slope radicand.
  double radicand(double x) const;
  // h(x) = sqrt(G(x)) - mu(x); same zero set as f where mu > 0, better conditioned.
  double turning_function(double x) const;
  // branch * sqrt(G f)/(sqrt(E) mu); TurningRegionError for f < 0,
  // SingularSlopeError for mu = 0.
  double radial_slope(double x, int branch) const;

  Admissibility admissibility() const;

  // K for which the constant curve x(theta) = x solves the equation.
  double constant_curvature(double x) const;
  // Constant solutions inside the open domain, ascending.
  std::vector<double> constant_solutions() const;

  // Cn cases, turning-point start at a: true when the turning function stays
  // positive beyond a, i.e. the solution escapes monotonically to infinity.
  bool escape_monotone(double a) const;

 private:
  MetricProfile profile_;
  double K_;
  std::optional<double> lambda_;
  std::optional<InitialCondition> ic_;
};

}  // namespace hmin
