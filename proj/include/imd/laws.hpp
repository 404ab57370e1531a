#pragma once
// Limit laws for the scaled monomer count: the Gaussian law with variance
// lambda and the quartic law with density c exp(-lambda_c z^4 / 24), plus the
// algebraic coefficient identities tying the chain's conditional moments to
// those laws, and log-log rate fitting across system sizes.

#include <utility>
#include <vector>

#include "imd/model.hpp"

namespace imd {

enum class LawKind { kGaussian, kQuartic };

struct LimitLaw {
  LawKind kind;
  double param;  // variance lambda (Gaussian) or lambda_c (quartic)

  static LimitLaw gaussian(double lambda);
  static LimitLaw quartic(double lambda_c);
};

// CDF of the law at z.  Gaussian via erfc; quartic via adaptive quadrature of
// the density from 0 (F(0) = 1/2 exactly by symmetry), truncated where the
// analytic tail bound drops below 1e-12.
double limit_cdf(const LimitLaw& law, double z);

// 2 L1'(m0) / (2! L2(m0)); equals 1/(2 lambda) at any non-degenerate
// maximizer.  Throws classification_error when m0 is not one.
double gaussian_coefficient_check(double m0, const ModelParams& p);

// 2 L1'''(m0) / (4! L2(m0)); equals lambda_c/24 = 1/2 + 17 sqrt(2)/48 at the
// tricritical point.  Throws classification_error off the tricritical point.
double quartic_coefficient_check(double m0, const ModelParams& p);

struct RateFit {
  std::vector<std::pair<double, double>> points;  // (N, ks)
  double slope = 0;        // OLS slope on (log N, log ks)
  double intercept = 0;
  double residual = 0;     // max |log ks - (intercept + slope log N)|
  double max_scaled_sqrt = 0;     // max ks * N^{1/2}
  double max_scaled_quarter = 0;  // max ks * N^{1/4}
};

// Least squares in log-log coordinates; needs >= 4 points with ks > 0.
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace imd
