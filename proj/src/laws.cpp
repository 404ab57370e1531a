#include "imd/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imd/errors.hpp"
#include "imd/special.hpp"

namespace imd {

LimitLaw LimitLaw::gaussian(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda))
    throw usage_error("LimitLaw: need variance lambda > 0");
  return {LawKind::kGaussian, lambda};
}

LimitLaw LimitLaw::quartic(double lambda_c) {
  if (!(lambda_c > 0) || !std::isfinite(lambda_c))
    throw usage_error("LimitLaw: need lambda_c > 0");
  return {LawKind::kQuartic, lambda_c};
}

namespace {

// Quartic density c exp(-beta z^4), beta = lambda_c/24,
// c = beta^{1/4} / (2 Gamma(5/4)) so the total mass is 1.
struct Quartic {
  double beta, c, z_cut;
  explicit Quartic(double lambda_c)
      : beta(lambda_c / 24.0),
        c(std::pow(beta, 0.25) / (2.0 * std::tgamma(1.25))),
        // exp(-beta z^4) integrates to less than exp(-beta z^4)/(4 beta z^3)
        // beyond z; beta z^4 = 40 pushes that far below the 1e-12 tolerance.
        z_cut(std::pow(40.0 / beta, 0.25)) {}
};

}  // namespace

double limit_cdf(const LimitLaw& law, double z) {
  if (!std::isfinite(z)) return z > 0 ? 1.0 : 0.0;
  if (law.kind == LawKind::kGaussian)
    return normal_cdf(z / std::sqrt(law.param));

  const Quartic q(law.param);
  const double az = std::min(std::abs(z), q.z_cut);
  const double half = adaptive_simpson(
      [&](double u) { return q.c * std::exp(-q.beta * u * u * u * u); },
      0.0, az, 1e-12);
  const double f = 0.5 + (z < 0 ? -half : half);
  return std::min(1.0, std::max(0.0, f));
}

double gaussian_coefficient_check(double m0, const ModelParams& p) {
  if (std::abs(fixed_point_residual(m0, p)) > 1e-6)
    throw classification_error("gaussian_coefficient_check: m0 is not a maximizer");
  if (!(1.0 - 2.0 * p.J * g_prime(tau(m0, p)) > 1e-8))
    throw classification_error("gaussian_coefficient_check: degenerate maximizer");
  return 2.0 * L1_deriv(m0, p, 1) / (2.0 * L2(m0, p));
}

double quartic_coefficient_check(double m0, const ModelParams& p) {
  if (std::abs(fixed_point_residual(m0, p)) > 1e-6)
    throw classification_error("quartic_coefficient_check: m0 is not a maximizer");
  const double d2 = p_tilde_deriv(m0, p, 2);
  const double d3 = p_tilde_deriv(m0, p, 3);
  if (std::abs(d2) > 1e-6 || std::abs(d3) > 1e-6)
    throw classification_error("quartic_coefficient_check: point is not tricritical");
  return 2.0 * L1_deriv(m0, p, 3) / (24.0 * L2(m0, p));
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw usage_error("rate_fit: need >= 4 points");
  for (const auto& [n, ks] : points)
    if (!(n > 0) || !(ks > 0)) throw usage_error("rate_fit: need N > 0 and ks > 0");

  RateFit fit;
  fit.points = points;
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [nn, ks] : points) {
    sx += std::log(nn);
    sy += std::log(ks);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [nn, ks] : points) {
    const double dx = std::log(nn) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(ks) - my);
  }
  if (!(sxx > 0)) throw usage_error("rate_fit: degenerate N values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residual = 0;
  fit.max_scaled_sqrt = 0;
  fit.max_scaled_quarter = 0;
  for (const auto& [nn, ks] : points) {
    const double pred = fit.intercept + fit.slope * std::log(nn);
    fit.residual = std::max(fit.residual, std::abs(std::log(ks) - pred));
    fit.max_scaled_sqrt = std::max(fit.max_scaled_sqrt, ks * std::sqrt(nn));
    fit.max_scaled_quarter = std::max(fit.max_scaled_quarter, ks * std::pow(nn, 0.25));
  }
  return fit;
}

}  // namespace imd
