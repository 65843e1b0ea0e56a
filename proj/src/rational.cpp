#include "hmin/rational.hpp"

#include "hmin/errors.hpp"

#include <cmath>

namespace hmin {

Rational best_rational(double x, std::int64_t q_max, double exact_tol) {
  if (!std::isfinite(x)) throw InvalidInput("best_rational needs a finite value");
  if (q_max < 1) throw InvalidInput("q_max must be >= 1");
  // Convergents h_k/k_k from the recurrences h_k = a_k h_{k-1} + h_{k-2}.
  std::int64_t h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  double rem = x;
  Rational best{static_cast<std::int64_t>(std::floor(x)), 1};
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(rem);
    if (std::abs(fl) > 9e15) break;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t h = a * h0 + h1, k = a * k0 + k1;
    if (k > q_max) break;
    best = {h, k};
    if (std::abs(best.value() - x) <= exact_tol * std::max(1.0, std::abs(x))) break;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    const double frac = rem - fl;
    if (frac <= 0.0) break;
    rem = 1.0 / frac;
  }
  return best;
}

std::optional<Rational> simplest_rational_between(double lo, double hi, std::int64_t q_max) {
  if (!(lo < hi)) std::swap(lo, hi);
  if (!(lo < hi)) return std::nullopt;
  // Smallest denominator first; for each q the candidate numerator is the
  // smallest integer strictly above q*lo.
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const double qd = static_cast<double>(q);
    auto p = static_cast<std::int64_t>(std::floor(lo * qd)) + 1;
    if (static_cast<double>(p) / qd <= lo) ++p;
    if (static_cast<double>(p) / qd < hi) return Rational{p, q};
  }
  return std::nullopt;
}

}  // namespace hmin
