#pragma once
#include <cmath>
#include <cstddef>

// Small numerical utilities shared across the library.

namespace imd {

double log_gamma(double x);  // thread-safe lgamma
double log_factorial(long n);
double log_binomial(long n, long k);

// Regularized incomplete gamma functions P(a,x), Q(a,x) = 1 - P(a,x).
double reg_gamma_p(double a, double x);
double reg_gamma_q(double a, double x);

// Survival function of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

// Standard normal CDF via erfc.
double normal_cdf(double z);

// 1 / (1 + e^{-x}) and its log, overflow-safe on both sides.
double sigmoid(double x);
double log_sigmoid(double x);

namespace detail {
template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace imd
