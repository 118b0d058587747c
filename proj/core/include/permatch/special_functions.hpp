#ifndef PERMATCH_SPECIAL_FUNCTIONS_HPP
#define PERMATCH_SPECIAL_FUNCTIONS_HPP

#include <span>

namespace permatch {

class Rng;

/// Thread-safe log Gamma for positive arguments.
double log_gamma(double x);
/// log B(a, b) for the complete beta function.
double log_beta(double a, double b);
/// Stable log(sum(exp(x))); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> x);

/// log I_x(a, b), the regularized incomplete beta. Continued fraction with the
/// symmetry switch at x > (a + 1) / (a + b + 2).
double log_regularized_inc_beta(double x, double a, double b);

/// log of the unregularized incomplete beta B(q; a, b) = int_0^q t^(a-1) (1-t)^(b-1) dt.
/// Requires 0 < q <= 1 and a, b > 0.
double log_inc_beta(double q, double a, double b);

/// Draw from Beta(a, b) conditioned on (0, limit) by inverting the
/// regularized incomplete beta with bisection.
double sample_truncated_beta(double limit, double a, double b, Rng& rng);

} // namespace permatch

#endif
