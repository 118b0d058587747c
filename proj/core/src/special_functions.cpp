#include "permatch/special_functions.hpp"

#include "permatch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace permatch {

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 20000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny)
    d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny)
      d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny)
      c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps)
      return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

} // namespace

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double log_sum_exp(std::span<const double> x) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : x)
    top = std::max(top, v);
  if (top == -std::numeric_limits<double>::infinity())
    return top;
  double acc = 0.0;
  for (double v : x)
    acc += std::exp(v - top);
  return top + std::log(acc);
}

double log_regularized_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("incomplete beta requires a, b > 0");
  if (x <= 0.0)
    return -std::numeric_limits<double>::infinity();
  if (x >= 1.0)
    return 0.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0))
    return log_front + std::log(beta_continued_fraction(x, a, b)) - std::log(a);
  const double upper = std::exp(log_front + std::log(beta_continued_fraction(1.0 - x, b, a)) -
                                std::log(b));
  return std::log1p(-upper);
}

double log_inc_beta(double q, double a, double b) {
  if (!(q > 0.0) || q > 1.0)
    throw std::domain_error("incomplete beta requires 0 < q <= 1");
  return log_regularized_inc_beta(q, a, b) + log_beta(a, b);
}

double sample_truncated_beta(double limit, double a, double b, Rng& rng) {
  if (!(limit > 0.0) || limit > 1.0)
    throw std::domain_error("truncation limit must lie in (0, 1]");
  const double log_target = std::log(rng.uniform()) + log_regularized_inc_beta(limit, a, b);
  double lo = 0.0;
  double hi = limit;
  for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_regularized_inc_beta(mid, a, b) < log_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace permatch
