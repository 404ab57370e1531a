#include <cmath>
#include <vector>

#include "doctest.h"
#include "imd/errors.hpp"
#include "imd/model.hpp"
#include "imd/phase.hpp"

using namespace imd;

namespace {

// test-local central difference, deliberately independent of imd/numdiff.hpp
template <class F>
double cdiff(F f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

// the plausible mis-derivation: coefficient 2 instead of 4 under the root
double g_wrong(double x) {
  const double e2 = std::exp(2.0 * x);
  return 0.5 * (std::sqrt(e2 * e2 + 2.0 * e2) - e2);
}

}  // namespace

TEST_CASE("g satisfies its defining quadratic on the whole real line") {
  for (double x : {-400.0, -50.0, -3.0, -0.7, 0.0, 0.4, 2.0, 30.0, 300.0}) {
    const double g = g_of(x);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    // g^2 = e^{2x} (1 - g), rearranged to avoid overflow: g^2/(1-g) = e^{2x}.
    // Past x ~ 18 the double g saturates at 1, so 1-g must come from the
    // dedicated cancellation-free accessor.
    if (x <= 0.0) {
      const double lhs = g * g;
      const double rhs = std::exp(2.0 * x) * (1.0 - g);
      CHECK(std::abs(lhs - rhs) <= 1e-15 * std::max(1.0, rhs));
    } else {
      const double lhs = 2.0 * std::log(g) - log_one_minus_g(x);
      CHECK(std::abs(lhs - 2.0 * x) <= 1e-12 * std::max(1.0, 2.0 * x));
    }
  }
}

TEST_CASE("g is strictly increasing with the golden-ratio value at 0") {
  CHECK(g_of(0.0) == doctest::Approx(0.5 * (std::sqrt(5.0) - 1.0)).epsilon(1e-15));
  double prev = -1.0;
  for (double x = -17.0; x <= 17.0; x += 0.25) {
    const double g = g_of(x);
    CHECK(g > prev);  // strict until the double saturates near 1
    prev = g;
  }
  // past saturation the monotone content moves to 1-g, tracked in log form
  double prev_log = log_one_minus_g(17.0);
  for (double x = 18.0; x <= 300.0; x += 20.0) {
    const double cur = log_one_minus_g(x);
    CHECK(cur < prev_log);
    prev_log = cur;
  }
}

TEST_CASE("one_minus_g and its log are cancellation-free") {
  for (double x : {-200.0, -5.0, 0.0, 1.0, 5.0, 20.0, 200.0}) {
    const double omg = one_minus_g(x);
    CHECK(omg > 0.0);
    CHECK(omg <= 1.0);
    CHECK(std::abs(one_minus_g(x) + g_of(x) - 1.0) <= 1e-14);
    CHECK(log_one_minus_g(x) == doctest::Approx(std::log(omg)).epsilon(1e-12));
  }
  // far below: e^{2x} underflows; the limit values must come out exact
  CHECK(g_of(-400.0) == 0.0);
  CHECK(one_minus_g(-400.0) == 1.0);
  CHECK(log_one_minus_g(-400.0) == 0.0);
  // far above: 1-g ~ e^{-2x} is tiny but its log must stay finite and linear
  CHECK(log_one_minus_g(300.0) == doctest::Approx(-600.0).epsilon(1e-10));
}

TEST_CASE("the coefficient under the root must be 4, not 2") {
  // with coefficient 2 the tricritical fixed point is lost entirely
  const TricriticalPoint& tc = tricritical();
  const double x = tau(tc.m_c, {tc.J_c, tc.h_c});
  CHECK(std::abs(g_of(x) - tc.m_c) <= 1e-12);
  CHECK(std::abs(g_wrong(x) - tc.m_c) > 0.2);
}

TEST_CASE("g_prime matches a central difference of g") {
  for (double x : {-4.0, -1.0, 0.0, 0.3, 1.7, 6.0}) {
    const double want = cdiff([](double t) { return g_of(t); }, x, 1e-6);
    CHECK(g_prime(x) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("tricritical constants satisfy their defining equations") {
  const TricriticalPoint& tc = tricritical();
  const ModelParams pc{tc.J_c, tc.h_c};
  // m_c is a fixed point and the first three derivatives of p~ vanish there
  CHECK(std::abs(fixed_point_residual(tc.m_c, pc)) <= 1e-14);
  CHECK(std::abs(p_tilde_deriv(tc.m_c, pc, 1)) <= 1e-12);
  CHECK(std::abs(p_tilde_deriv(tc.m_c, pc, 2)) <= 1e-12);
  CHECK(std::abs(p_tilde_deriv(tc.m_c, pc, 3)) <= 1e-7);
  // marginal stability: 2 J_c g'(tau(m_c)) = 1 exactly
  CHECK(2.0 * tc.J_c * g_prime(tau(tc.m_c, pc)) == doctest::Approx(1.0).epsilon(1e-14));
  // closed forms
  CHECK(tc.m_c == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-16));
  CHECK(tc.J_c == doctest::Approx(0.25 * (3.0 + 2.0 * std::sqrt(2.0))).epsilon(1e-16));
  CHECK(tau(tc.m_c, pc) == doctest::Approx(0.5 * std::log(2.0 * std::sqrt(2.0) - 2.0)).epsilon(1e-14));
  CHECK(tc.lambda_c == doctest::Approx(12.0 + 8.5 * std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("p_tilde derivatives agree with finite differences of p_tilde") {
  const ModelParams p{0.8, -0.2};
  for (double m : {0.2, 0.45, 0.7, 0.9}) {
    const double d1 = cdiff([&](double t) { return p_tilde(t, p); }, m, 1e-6);
    CHECK(p_tilde_deriv(m, p, 1) == doctest::Approx(d1).epsilon(1e-7));
    const double d2 = cdiff([&](double t) { return p_tilde_deriv(t, p, 1); }, m, 1e-6);
    CHECK(p_tilde_deriv(m, p, 2) == doctest::Approx(d2).epsilon(1e-7));
    const double d3 = cdiff([&](double t) { return p_tilde_deriv(t, p, 2); }, m, 1e-5);
    CHECK(p_tilde_deriv(m, p, 3) == doctest::Approx(d3).epsilon(1e-5));
  }
}

TEST_CASE("p_tilde fourth derivative at the tricritical point gives lambda_c") {
  const TricriticalPoint& tc = tricritical();
  CHECK(-p_tilde_deriv(tc.m_c, {tc.J_c, tc.h_c}, 4) ==
        doctest::Approx(tc.lambda_c).epsilon(1e-7));
}

TEST_CASE("L_k match an independent long-double evaluation") {
  const ModelParams p{1.1, 0.3};
  for (double m : {0.15, 0.4, 0.62, 0.88}) {
    const long double E = std::exp(2.0L * ((2.0L * m - 1.0L) * p.J + p.h));
    const long double omm = 1.0L - m;
    const long double l1 =
        2.0L * (static_cast<long double>(m) * m * omm - omm * omm * E) / (omm + E);
    const long double l2 =
        4.0L * (static_cast<long double>(m) * m * omm + omm * omm * E) / (omm + E);
    CHECK(L1(m, p) == doctest::Approx(static_cast<double>(l1)).epsilon(1e-13));
    CHECK(L2(m, p) == doctest::Approx(static_cast<double>(l2)).epsilon(1e-13));
  }
}

TEST_CASE("L1 vanishes exactly at consistency fixed points") {
  for (const ModelParams p : {ModelParams{0.5, 0.0}, ModelParams{1.2, 0.4}}) {
    const auto mx = find_maximizers(p);
    for (const auto& m : mx) CHECK(std::abs(L1(m.m, p)) <= 1e-13);
  }
}

TEST_CASE("L1_deriv matches central differences of L1") {
  const ModelParams p{0.9, -0.1};
  for (double m : {0.3, 0.55, 0.8}) {
    const double d1 = cdiff([&](double t) { return L1(t, p); }, m, 1e-6);
    CHECK(L1_deriv(m, p, 1) == doctest::Approx(d1).epsilon(1e-7));
    const double d2 = cdiff([&](double t) { return L1_deriv(t, p, 1); }, m, 1e-5);
    CHECK(L1_deriv(m, p, 2) == doctest::Approx(d2).epsilon(1e-6));
  }
}

TEST_CASE("third derivative of L1 at the tricritical point, closed forms") {
  // Symbolic differentiation of L1 at the tricritical parameters gives
  //   L1'''(m_c) = 16/3 + 4 sqrt(2),   L2(m_c) = 16 - 32 sqrt(2)/3,
  // so the ratio is L1'''/L2 = 6 + 17 sqrt(2)/4 and the quartic coefficient
  // identity reads 2 L1''' / (4! L2) = 1/2 + 17 sqrt(2)/48.
  const TricriticalPoint& tc = tricritical();
  const ModelParams pc{tc.J_c, tc.h_c};
  const double l1ppp = L1_deriv(tc.m_c, pc, 3);
  const double l2 = L2(tc.m_c, pc);
  CHECK(l1ppp == doctest::Approx(16.0 / 3.0 + 4.0 * std::sqrt(2.0)).epsilon(1e-7));
  CHECK(l2 == doctest::Approx(16.0 - 32.0 * std::sqrt(2.0) / 3.0).epsilon(1e-13));
  CHECK(l1ppp / l2 == doctest::Approx(6.0 + 17.0 * std::sqrt(2.0) / 4.0).epsilon(1e-7));
  CHECK(2.0 * l1ppp / (24.0 * l2) ==
        doctest::Approx(0.5 + 17.0 * std::sqrt(2.0) / 48.0).epsilon(1e-7));
}

TEST_CASE("U_k at t = 0 reduces to L_k") {
  const ModelParams p{0.7, 0.2};
  for (double m : {0.25, 0.5, 0.75}) {
    CHECK(U_k(m, 0.0, 1, p) == doctest::Approx(L1(m, p)).epsilon(1e-12));
    CHECK(U_k(m, 0.0, 2, p) == doctest::Approx(L2(m, p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)U_k(0.5, 0.0, 3, p), usage_error);
}

TEST_CASE("lambda_variance agrees with the finite-difference curvature") {
  // lambda = -1/p~''(m0) - 1/(2J), both forms must agree at a maximizer
  const ModelParams p{0.5, 0.0};
  const auto mx = find_maximizers(p);
  REQUIRE(mx.size() == 1);
  const double lam = lambda_variance(mx[0].m, p);
  const double curv = p_tilde_deriv(mx[0].m, p, 2);
  CHECK(lam == doctest::Approx(-1.0 / curv - 1.0 / (2.0 * p.J)).epsilon(1e-9));
  CHECK(lam > 0.0);
}

TEST_CASE("lambda_variance is stable at J = 0") {
  const ModelParams p{0.0, 0.0};
  const double g = g_of(0.0);
  CHECK(lambda_variance(g, p) == doctest::Approx(g_prime(0.0)).epsilon(1e-14));
}

TEST_CASE("lambda_variance rejects the degenerate point") {
  const TricriticalPoint& tc = tricritical();
  CHECK_THROWS_AS((void)lambda_variance(tc.m_c, ModelParams{tc.J_c, tc.h_c}),
                  classification_error);
}

TEST_CASE("b_field composes log N with the shifted field") {
  const ModelParams p{1.3, -0.4};
  CHECK(b_field(p, 100) == doctest::Approx(0.5 * std::log(100.0) - 1.7).epsilon(1e-15));
}
