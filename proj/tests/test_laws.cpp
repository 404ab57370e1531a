#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "imd/errors.hpp"
#include "imd/laws.hpp"
#include "imd/model.hpp"
#include "imd/phase.hpp"
#include "imd/special.hpp"

using namespace imd;

TEST_CASE("gaussian cdf reduces to erfc") {
  const LimitLaw law = LimitLaw::gaussian(2.5);
  for (double z : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
    const double want = 0.5 * std::erfc(-z / std::sqrt(2.0 * 2.5));
    CHECK(limit_cdf(law, z) == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("quartic cdf against the incomplete-gamma closed form") {
  // with density c e^{-beta z^4}, F(z) = (1 + sgn(z) P(1/4, beta z^4)) / 2
  const double lambda_c = tricritical().lambda_c;
  const double beta = lambda_c / 24.0;
  const LimitLaw law = LimitLaw::quartic(lambda_c);
  for (double z = -3.0; z <= 3.0; z += 0.17) {
    const double sgn = z < 0 ? -1.0 : 1.0;
    const double want = 0.5 * (1.0 + sgn * reg_gamma_p(0.25, beta * z * z * z * z));
    CHECK(limit_cdf(law, z) == doctest::Approx(want).epsilon(5e-13));
  }
}

TEST_CASE("quartic cdf against blunt trapezoid quadrature") {
  const double lambda_c = tricritical().lambda_c;
  const double beta = lambda_c / 24.0;
  const LimitLaw law = LimitLaw::quartic(lambda_c);
  const double c = std::pow(beta, 0.25) / (2.0 * std::tgamma(1.25));
  const double z = 0.7;
  const int n = 400000;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = z * i / n;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * c * std::exp(-beta * u * u * u * u);
  }
  acc *= z / n;
  CHECK(limit_cdf(law, z) == doctest::Approx(0.5 + acc).epsilon(1e-10));
}

TEST_CASE("quartic cdf basic shape") {
  const LimitLaw law = LimitLaw::quartic(tricritical().lambda_c);
  CHECK(limit_cdf(law, 0.0) == 0.5);
  CHECK(limit_cdf(law, 50.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(limit_cdf(law, -50.0) == doctest::Approx(0.0).epsilon(1e-13));
  double prev = -1.0;
  for (double z = -4.0; z <= 4.0; z += 0.05) {
    const double F = limit_cdf(law, z);
    CHECK(F >= prev);
    prev = F;
    CHECK(limit_cdf(law, z) + limit_cdf(law, -z) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("law factories validate their parameter") {
  CHECK_THROWS_AS((void)LimitLaw::gaussian(0.0), usage_error);
  CHECK_THROWS_AS((void)LimitLaw::gaussian(-1.0), usage_error);
  CHECK_THROWS_AS((void)LimitLaw::quartic(0.0), usage_error);
}

TEST_CASE("gaussian coefficient identity at a unique maximizer") {
  const ModelParams p{0.5, 0.0};
  const auto mx = find_maximizers(p);
  REQUIRE(mx.size() == 1);
  const double coeff = gaussian_coefficient_check(mx[0].m, p);
  CHECK(coeff == doctest::Approx(1.0 / (2.0 * mx[0].lambda)).epsilon(1e-9));
  CHECK_THROWS_AS((void)gaussian_coefficient_check(0.3, p), classification_error);
}

TEST_CASE("quartic coefficient identity at the tricritical point only") {
  const TricriticalPoint& tc = tricritical();
  const ModelParams pc{tc.J_c, tc.h_c};
  const double coeff = quartic_coefficient_check(tc.m_c, pc);
  CHECK(coeff == doctest::Approx(0.5 + 17.0 * std::sqrt(2.0) / 48.0).epsilon(1e-6));
  CHECK(coeff == doctest::Approx(tc.lambda_c / 24.0).epsilon(1e-6));
  const ModelParams off{0.5, 0.0};
  const auto mx = find_maximizers(off);
  CHECK_THROWS_AS((void)quartic_coefficient_check(mx[0].m, off), classification_error);
}

TEST_CASE("rate_fit is exact on synthetic power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double N : {500.0, 1000.0, 2000.0, 4000.0, 8000.0})
    pts.emplace_back(N, 1.0 / std::sqrt(N));
  auto fit = rate_fit(pts);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);
  CHECK(fit.max_scaled_sqrt == doctest::Approx(1.0).epsilon(1e-12));

  pts.clear();
  for (double N : {100.0, 400.0, 900.0, 1600.0})
    pts.emplace_back(N, 3.0 * std::pow(N, -0.25));
  fit = rate_fit(pts);
  CHECK(fit.slope == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.max_scaled_quarter == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("rate_fit input validation") {
  std::vector<std::pair<double, double>> pts = {{100.0, 0.1}, {200.0, 0.05}, {400.0, 0.02}};
  CHECK_THROWS_AS((void)rate_fit(pts), usage_error);  // too few points
  pts.emplace_back(800.0, 0.0);
  CHECK_THROWS_AS((void)rate_fit(pts), usage_error);  // nonpositive ks
}
