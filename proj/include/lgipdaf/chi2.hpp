#pragma once

#include <cmath>
#include <stdexcept>

namespace lgipdaf {

/// Regularized lower incomplete gamma P(a, x), by series for x < a+1 and
/// continued fraction otherwise.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Lentz's continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double q = std::exp(-x + a * std::log(x) - lg) * h;
  return 1.0 - q;
}

/// Chi-square CDF with dof degrees of freedom.
inline double chi2_cdf(double x, int dof) {
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

/// Inverse chi-square CDF by bracketed bisection; |CDF(tau) - p| <= 1e-12.
inline double chi2_inv_cdf(double p, int dof) {
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("chi2_inv_cdf: p must be in [0, 1)");
  if (dof < 1) throw std::invalid_argument("chi2_inv_cdf: dof must be >= 1");
  if (p == 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (chi2_cdf(hi, dof) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, dof) < p) lo = mid; else hi = mid;
    if (hi - lo < 1e-13 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lgipdaf
