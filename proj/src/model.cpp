#include "imd/model.hpp"

#include <cmath>
#include <string>

#include "imd/errors.hpp"
#include "imd/numdiff.hpp"
#include "imd/special.hpp"

namespace imd {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw usage_error(std::string(what) + ": non-finite input");
}

void require_unit(double m, const char* what) {
  require_finite(m, what);
  if (!(m >= 0.0 && m <= 1.0)) throw usage_error(std::string(what) + ": need m in [0,1]");
}

void require_params(const ModelParams& p) {
  require_finite(p.J, "ModelParams.J");
  require_finite(p.h, "ModelParams.h");
  if (p.J < 0) throw usage_error("ModelParams: need J >= 0");
}

// Finite-difference step for interior points, shrunk near the endpoints.
double fd_step(double m) {
  const double room = 0.25 * std::min(m, 1.0 - m);
  return std::min(1e-3, room);
}

}  // namespace

const TricriticalPoint& tricritical() {
  static const TricriticalPoint tc = [] {
    const long double r2 = sqrtl(2.0L);
    TricriticalPoint t;
    t.J_c = static_cast<double>(1.0L / (4.0L * (3.0L - 2.0L * r2)));
    t.h_c = static_cast<double>(0.5L * logl(2.0L * r2 - 2.0L) - 0.25L);
    t.m_c = static_cast<double>(2.0L - r2);
    t.lambda_c = static_cast<double>(12.0L + 8.5L * r2);  // 24 (1/2 + 17 sqrt2 / 48)
    return t;
  }();
  return tc;
}

double b_field(const ModelParams& p, long N) {
  require_params(p);
  if (N < 1) throw usage_error("b_field: need N >= 1");
  return 0.5 * std::log(static_cast<double>(N)) + p.h - p.J;
}

// Both branches below are cancellation-free: for x >= 0 divide through by
// e^{2x}, otherwise rationalize the square-root difference.
double g_of(double x) {
  require_finite(x, "g_of");
  if (x >= 0) {
    const double q = 4.0 * std::exp(-2.0 * x);
    return 2.0 / (1.0 + std::sqrt(1.0 + q));
  }
  const double e = std::exp(2.0 * x);
  if (e == 0.0) return 0.0;
  return 2.0 * e / (e + std::sqrt(e * (e + 4.0)));
}

double one_minus_g(double x) {
  require_finite(x, "one_minus_g");
  if (x >= 0) {
    const double q = 4.0 * std::exp(-2.0 * x);
    const double s = 1.0 + std::sqrt(1.0 + q);
    return q / (s * s);
  }
  const double e = std::exp(2.0 * x);
  if (e == 0.0) return 1.0;
  const double s = e + std::sqrt(e * (e + 4.0));
  return 4.0 * e / (s * s);
}

double log_one_minus_g(double x) {
  require_finite(x, "log_one_minus_g");
  if (x >= 0) {
    const double q = 4.0 * std::exp(-2.0 * x);
    const double s = 1.0 + std::sqrt(1.0 + q);
    return std::log(4.0) - 2.0 * x - 2.0 * std::log(s);
  }
  const double e = std::exp(2.0 * x);
  if (e == 0.0) return 0.0;
  const double s = e + std::sqrt(e * (e + 4.0));
  return std::log(4.0 * e) - 2.0 * std::log(s);
}

double g_prime(double x) {
  const double g = g_of(x);
  const double omg = one_minus_g(x);
  return 2.0 * g * omg / (1.0 + omg);  // 2 g (1-g) / (2-g)
}

double tau(double m, const ModelParams& p) {
  require_params(p);
  require_unit(m, "tau");
  return (2.0 * m - 1.0) * p.J + p.h;
}

double p_tilde(double m, const ModelParams& p) {
  const double x = tau(m, p);
  const double omg = one_minus_g(x);
  if (!(omg > 0.0 && omg < 1.0))
    throw numerical_error("p_tilde: g(tau) left (0,1); broken g evaluation");
  return -p.J * m * m - 0.5 * (omg + log_one_minus_g(x));
}

double p_tilde_deriv(double m, const ModelParams& p, int order) {
  require_params(p);
  require_finite(m, "p_tilde_deriv");
  if (!(m > 0.0 && m < 1.0)) throw usage_error("p_tilde_deriv: need m in (0,1)");
  switch (order) {
    case 1:
      return 2.0 * p.J * (g_of(tau(m, p)) - m);
    case 2:
      return 2.0 * p.J * (2.0 * p.J * g_prime(tau(m, p)) - 1.0);
    case 3:
      return richardson_first([&](double x) { return p_tilde_deriv(x, p, 2); }, m, fd_step(m));
    case 4:
      return richardson_second([&](double x) { return p_tilde_deriv(x, p, 2); }, m, fd_step(m));
    default:
      throw usage_error("p_tilde_deriv: order must be 1..4");
  }
}

double fixed_point_residual(double m, const ModelParams& p) {
  return m - g_of(tau(m, p));
}

namespace {

// Shared evaluation of L_k; branch keeps every exponential bounded.
double l_k(double m, const ModelParams& p, int k) {
  const double x = tau(m, p);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double pow2 = (k == 1) ? 2.0 : 4.0;
  const double om = 1.0 - m;
  if (x <= 0) {
    const double e = std::exp(2.0 * x);
    return pow2 * (m * m * om + sign * om * om * e) / (om + e);
  }
  const double f = std::exp(-2.0 * x);
  return pow2 * (m * m * om * f + sign * om * om) / (om * f + 1.0);
}

}  // namespace

double L1(double m, const ModelParams& p) {
  require_unit(m, "L1");
  return l_k(m, p, 1);
}

double L2(double m, const ModelParams& p) {
  require_unit(m, "L2");
  return l_k(m, p, 2);
}

namespace {

// Analytic first derivative of L1 = n/d with n = 2((1-m) m^2 - (1-m)^2 E),
// d = (1-m) + E, E = e^{2 tau(m)}, E' = 4 J E.  For tau > 0 the quotient is
// rescaled by e^{-2 tau} to keep all factors bounded.
double l1_prime(double m, const ModelParams& p) {
  const double x = tau(m, p);
  const double om = 1.0 - m;
  const double J4 = 4.0 * p.J;
  if (x <= 0) {
    const double e = std::exp(2.0 * x);
    const double n = 2.0 * (om * m * m - om * om * e);
    const double d = om + e;
    const double np = 2.0 * (-m * m + 2.0 * m * om + om * e * (2.0 - J4 * om));
    const double dp = -1.0 + J4 * e;
    return (np * d - n * dp) / (d * d);
  }
  const double f = std::exp(-2.0 * x);  // e^{-2 tau}
  const double nf = 2.0 * (om * m * m * f - om * om);
  const double df = om * f + 1.0;
  const double npf = 2.0 * ((-m * m + 2.0 * m * om) * f + om * (2.0 - J4 * om));
  const double dpf = -f + J4;
  return (npf * df - nf * dpf) / (df * df);
}

}  // namespace

double L1_deriv(double m, const ModelParams& p, int order) {
  require_params(p);
  require_finite(m, "L1_deriv");
  if (!(m > 0.0 && m < 1.0)) throw usage_error("L1_deriv: need m in (0,1)");
  switch (order) {
    case 1:
      return l1_prime(m, p);
    case 2:
      return richardson_first([&](double x) { return l1_prime(x, p); }, m, fd_step(m));
    case 3:
      return richardson_second([&](double x) { return l1_prime(x, p); }, m, fd_step(m));
    default:
      throw usage_error("L1_deriv: order must be 1..3");
  }
}

double U_k(double m, double t, int k, const ModelParams& p) {
  require_unit(m, "U_k");
  require_finite(t, "U_k");
  if (!(t >= 0.0 && t < 1.0)) throw usage_error("U_k: need 0 <= t < 1");
  if (k != 1 && k != 2) throw usage_error("U_k: k must be 1 or 2");
  const double x = tau(m, p);
  const double pow2 = (k == 1) ? 2.0 : 4.0;
  const double sign = (k == 1) ? -1.0 : 1.0;  // (-2)^k / 2^k

  // down-move term: m (m - t) * q E_- / (1 + q E_-), q = 1 - m + t
  double first = 0.0;
  {
    const double q = 1.0 - m + t;
    if (q > 0.0 && m > 0.0) {
      const double log_e = -2.0 * x + 4.0 * p.J * t;
      first = m * (m - t) * sigmoid(std::log(q) + log_e);
    }
  }
  // up-move term: (1-m) * w E_+ / (w + E_+), w = 1 - m - t
  double second = 0.0;
  {
    const double w = 1.0 - m - t;
    const double log_e = 2.0 * x + 4.0 * p.J * t;
    if (m < 1.0) {
      if (w > 0.0) {
        second = (1.0 - m) * w * sigmoid(log_e - std::log(w));
      } else if (w < 0.0) {
        if (log_e > 350.0) {
          second = (1.0 - m) * w;  // E_+ dominates
        } else {
          const double e = std::exp(log_e);
          const double den = w + e;
          if (den == 0.0) throw numerical_error("U_k: vanishing denominator");
          second = (1.0 - m) * w * e / den;
        }
      }
    }
  }
  return (pow2 * first + sign * pow2 * second) / (1.0 - t);
}

double lambda_variance(double m0, const ModelParams& p) {
  require_params(p);
  require_unit(m0, "lambda_variance");
  const double gp = g_prime(tau(m0, p));
  const double q = 2.0 * p.J * gp;
  // tolerance: at the tricritical point q == 1 analytically but rounds to
  // either side of 1, and either way the variance is meaningless there
  if (q >= 1.0 - 1e-12)
    throw classification_error("lambda_variance: 2J g'(tau(m0)) >= 1, not a strict maximum");
  return gp / (1.0 - q);
}

}  // namespace imd
