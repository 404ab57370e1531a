#pragma once

// Core closed forms of the imitative monomer-dimer mean-field model.
//
// A configuration on the complete graph K_N is a set of disjoint dimers; the
// uncovered vertices are monomers.  With monomer density m, the model weights
// configurations by exp(N(a m^2 + b m)) with a = J and b = (log N)/2 + h - J.
// Everything downstream is driven by the scalar function
//     g(x) = (sqrt(e^{4x} + 4 e^{2x}) - e^{2x}) / 2,
// the effective field tau(m) = (2m - 1) J + h, and the variational free
// energy density p~(m).

namespace imd {

struct ModelParams {
  double J = 0;  // imitation strength, J >= 0
  double h = 0;  // monomer field
};

// Tricritical point of the phase diagram and the quartic-law coefficient
// lambda_c = -p~''''(m_c) there.
struct TricriticalPoint {
  double J_c;
  double h_c;
  double m_c;
  double lambda_c;
};
const TricriticalPoint& tricritical();

// Field entering the lumped weights: (log N)/2 + h - J.
double b_field(const ModelParams& p, long N);

// Monomer-density root of g^2 = e^{2x}(1 - g); strictly increasing, range (0,1).
double g_of(double x);
// 1 - g(x) and log(1 - g(x)), computed without cancellation for large x.
double one_minus_g(double x);
double log_one_minus_g(double x);
// g'(x) = 2 g (1-g) / (2-g).
double g_prime(double x);

double tau(double m, const ModelParams& p);

// Variational free energy density p~(m) = -J m^2 - (1 - G + log(1 - G))/2,
// G = g(tau(m)).  Valid on [0,1].
double p_tilde(double m, const ModelParams& p);

// Derivatives of p~.  Orders 1 and 2 are closed forms:
//   p~'(m)  = 2J (g(tau(m)) - m)
//   p~''(m) = 2J (2J g'(tau(m)) - 1)
// Orders 3 and 4 are Richardson-extrapolated central differences of the
// analytic order-2 expression.
double p_tilde_deriv(double m, const ModelParams& p, int order);

// m - g(tau(m)); zero exactly at the consistency fixed points.
double fixed_point_residual(double m, const ModelParams& p);

// Conditional-increment coefficients
//   L_k(m) = 2^k (m^2 (1-m) + (-1)^k (1-m)^2 E) / ((1-m) + E),  E = e^{2 tau(m)}.
double L1(double m, const ModelParams& p);
double L2(double m, const ModelParams& p);

// d^order L1 / dm^order, order 1..3.  Order 1 is analytic; 2 and 3 are
// Richardson differences of the analytic first derivative.
double L1_deriv(double m, const ModelParams& p, int order);

// Finite-size conditional-increment function; U_k(m, 0) = L_k(m) and
// U_k(t/N, 1/N) reproduces the pair-update kernel moments exactly.
// Requires k in {1,2} and 0 <= t < 1.
double U_k(double m, double t, int k, const ModelParams& p);

// Limiting variance of sqrt(N) (m - m0) at a unique maximizer m0:
//   lambda = g'(tau(m0)) / (1 - 2J g'(tau(m0))).
// Stable at J = 0; throws classification_error when 2J g'(tau(m0)) >= 1.
double lambda_variance(double m0, const ModelParams& p);

}  // namespace imd
