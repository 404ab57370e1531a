#include "imd/special.hpp"

#include <cmath>
#include <limits>

#include "imd/errors.hpp"

namespace imd {

double log_gamma(double x) {
#ifdef __GLIBC__
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_factorial(long n) {
  if (n < 0) throw usage_error("log_factorial: negative argument");
  return log_gamma(static_cast<double>(n) + 1.0);
}

double log_binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) throw usage_error("log_binomial: need 0 <= k <= n");
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

namespace {

// Lower incomplete gamma by series, x < a+1.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
}

// Upper incomplete gamma by continued fraction (modified Lentz), x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, f = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * f;
}

}  // namespace

double reg_gamma_p(double a, double x) {
  if (!(a > 0) || !(x >= 0)) throw usage_error("reg_gamma_p: need a > 0, x >= 0");
  if (x == 0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double reg_gamma_q(double a, double x) {
  if (!(a > 0) || !(x >= 0)) throw usage_error("reg_gamma_q: need a > 0, x >= 0");
  if (x == 0) return 1.0;
  return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_sf(double x, double dof) {
  if (!(dof > 0)) throw usage_error("chi_square_sf: dof > 0");
  if (x <= 0) return 1.0;
  return reg_gamma_q(0.5 * dof, 0.5 * x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

}  // namespace imd
