#pragma once

#include <cstdint>
#include <optional>

namespace hmin {

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  bool operator==(const Rational&) const = default;
};

// Last continued-fraction convergent of x with denominator <= q_max.
// Stops early once a convergent matches x to `exact_tol`.
Rational best_rational(double x, std::int64_t q_max, double exact_tol = 1e-15);

// Simplest rational (smallest denominator, then numerator) strictly inside
// (lo, hi), provided its denominator is <= q_max.
std::optional<Rational> simplest_rational_between(double lo, double hi, std::int64_t q_max);

// Default rational tolerance 1e-9 q^2.
inline double default_rational_tol(std::int64_t q) { return 1e-9 * static_cast<double>(q) * static_cast<double>(q); }

}  // namespace hmin
