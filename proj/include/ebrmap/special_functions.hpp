#pragma once

// Scalar special functions used by the conjugate-mixture machinery.
// Self-contained (series / continued-fraction evaluations); all functions
// are pure and thread-safe.

namespace ebrmap {

// ln Gamma(x), x > 0. Lanczos approximation, ~1e-15 relative accuracy.
double log_gamma_fn(double x);

// ln Beta(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b).
double log_beta_fn(double a, double b);

// Digamma psi(x), x > 0.
double digamma(double x);

// Trigamma psi'(x), x > 0.
double trigamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a).
double regularized_gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

// Standard normal CDF and density.
double standard_normal_cdf(double z);
double standard_normal_pdf(double z);

namespace detail {

// Root of a continuous nondecreasing f on [lo, hi] with f(lo) <= 0 <= f(hi).
// Bisection with secant acceleration; stops when |f| <= ftol or the bracket
// collapses to floating-point resolution.
template <typename F>
double find_root_monotone(F&& f, double lo, double hi, double ftol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0) return lo;
  if (fhi < 0.0) return hi;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    // secant candidate, fall back to midpoint when degenerate
    double xs = (fhi != flo) ? lo + (hi - lo) * (-flo) / (fhi - flo) : x;
    double xm = 0.5 * (lo + hi);
    x = (xs > lo && xs < hi) ? 0.5 * (xs + xm) : xm;
    double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo <= 1e-15 * (1.0 + (lo < 0 ? -lo : lo))) break;
    if (fx < ftol && fx > -ftol && hi - lo <= 1e-9 * (1.0 + (lo < 0 ? -lo : lo))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail
}  // namespace ebrmap
