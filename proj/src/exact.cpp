#include "imd/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "imd/errors.hpp"
#include "imd/parallel.hpp"
#include "imd/special.hpp"

namespace imd {

namespace {

void require_N(long N) {
  if (N < 2) throw usage_error("exact: need N >= 2");
  if (N > kMaxExactN) throw usage_error("exact: N exceeds the 10^6 ceiling");
}

std::vector<long> make_support(long N) {
  std::vector<long> s;
  s.reserve(static_cast<std::size_t>(N / 2 + 1));
  for (long t = N % 2; t <= N; t += 2) s.push_back(t);
  return s;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// Unnormalized log weight of count t: binomial choice of the monomer set,
// perfect matchings on the rest, and the Gibbs tilt.
double log_weight(const ModelParams& p, long N, double b, long t) {
  const double td = static_cast<double>(t);
  return log_binomial(N, t) + dimer_count_log_weight(N - t) +
         p.J * td * td / static_cast<double>(N) + b * td;
}

std::vector<double> raw_log_weights(const ModelParams& p, long N) {
  const double b = b_field(p, N);  // validates params and N
  const std::vector<long> support = make_support(N);
  std::vector<double> lw(support.size());
  par::parallel_for(support.size(),
                    [&](std::size_t i) { lw[i] = log_weight(p, N, b, support[i]); });
  return lw;
}

}  // namespace

double ExactDistribution::prob(std::size_t i) const { return std::exp(log_probs[i]); }

double ExactDistribution::mean_m() const {
  return par::block_sum(support.size(), [&](std::size_t i) {
    return std::exp(log_probs[i]) * static_cast<double>(support[i]) / static_cast<double>(N);
  });
}

double dimer_count_log_weight(long L) {
  if (L < 0 || L % 2 != 0)
    throw usage_error("dimer_count_log_weight: need even L >= 0");
  return log_factorial(L) - log_factorial(L / 2) -
         static_cast<double>(L / 2) * std::log(2.0);
}

ExactDistribution exact_distribution(const ModelParams& p, long N) {
  require_N(N);
  ExactDistribution d;
  d.N = N;
  d.params = p;
  d.support = make_support(N);
  d.log_probs = raw_log_weights(p, N);
  const double lse = par::logsumexp(d.log_probs);
  par::parallel_for(d.log_probs.size(), [&](std::size_t i) { d.log_probs[i] -= lse; });
  return d;
}

double free_energy(const ModelParams& p, long N) {
  require_N(N);
  return par::logsumexp(raw_log_weights(p, N)) / static_cast<double>(N);
}

double free_energy_normalized(const ModelParams& p, long N) {
  return free_energy(p, N) - 0.5 * std::log(static_cast<double>(N));
}

bool count_on_side(long t, long N, double xi, Side side) {
  const double x = xi * static_cast<double>(N);
  if (std::abs(static_cast<double>(t) - x) <= 1e-9 * std::max(1.0, std::abs(x)))
    return false;  // the boundary atom belongs to neither side
  return side == Side::kBelow ? static_cast<double>(t) < x : static_cast<double>(t) > x;
}

ExactDistribution conditional(const ExactDistribution& dist, double xi, Side side) {
  if (!(xi > 0.0 && xi < 1.0)) throw usage_error("conditional: need xi in (0,1)");
  ExactDistribution out;
  out.N = dist.N;
  out.params = dist.params;
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    if (!count_on_side(dist.support[i], dist.N, xi, side)) continue;
    out.support.push_back(dist.support[i]);
    out.log_probs.push_back(dist.log_probs[i]);
  }
  if (out.support.empty())
    throw empty_condition_error("conditional: selected side has no admissible counts");
  const double lse = par::logsumexp(out.log_probs);
  par::parallel_for(out.log_probs.size(), [&](std::size_t i) { out.log_probs[i] -= lse; });
  return out;
}

double moments(const ExactDistribution& dist, double center, double scale_exponent,
               int order) {
  if (order < 1) throw usage_error("moments: need order >= 1");
  if (!std::isfinite(center) || !std::isfinite(scale_exponent))
    throw usage_error("moments: non-finite arguments");
  const double Nd = static_cast<double>(dist.N);
  const double scale = std::pow(Nd, scale_exponent);
  return par::block_sum(dist.support.size(), [&](std::size_t i) {
    const double w = (static_cast<double>(dist.support[i]) - Nd * center) / scale;
    return std::exp(dist.log_probs[i]) * ipow(w, order);
  });
}

double ks_distance(const ExactDistribution& dist, double center, double scale_exponent,
                   const LimitLaw& law) {
  if (!std::isfinite(center) || !std::isfinite(scale_exponent))
    throw usage_error("ks_distance: non-finite arguments");
  const std::size_t K = dist.support.size();
  const double Nd = static_cast<double>(dist.N);
  const double scale = std::pow(Nd, scale_exponent);

  std::vector<double> prob(K), cdf_law(K);
  par::parallel_for(K, [&](std::size_t i) {
    prob[i] = std::exp(dist.log_probs[i]);
    const double z = (static_cast<double>(dist.support[i]) - Nd * center) / scale;
    cdf_law[i] = limit_cdf(law, z);
  });
  std::vector<double> cum(K);
  double acc = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    acc += prob[i];
    cum[i] = acc;
  }
  // sup over jump points, approaching each atom from both sides
  return par::block_max(K, [&](std::size_t i) {
    const double hi = std::abs(cum[i] - cdf_law[i]);
    const double lo = std::abs(cum[i] - prob[i] - cdf_law[i]);
    return std::max(hi, lo);
  });
}

double accept_down(const ModelParams& p, long N, long t) {
  const long L = N - t;
  const double x = std::log(static_cast<double>(L + 1)) - std::log(static_cast<double>(N)) -
                   2.0 * tau(static_cast<double>(t) / N, p) + 4.0 * p.J / N;
  return sigmoid(x);
}

double accept_up(const ModelParams& p, long N, long t) {
  const long L = N - t;
  if (L < 2) return 0.0;  // no uncovered pair to flip
  const double y = 2.0 * tau(static_cast<double>(t) / N, p) + 4.0 * p.J / N +
                   std::log(static_cast<double>(N));
  return sigmoid(y - std::log(static_cast<double>(L - 1)));
}

PairKernel lumped_kernel(const ModelParams& p, long N) {
  require_N(N);
  b_field(p, N);  // validate params before the parallel fill
  PairKernel k;
  k.N = N;
  k.params = p;
  k.support = make_support(N);
  const std::size_t K = k.support.size();
  k.down.resize(K);
  k.up.resize(K);
  k.stay.resize(K);
  const double pairs = static_cast<double>(N) * (N - 1);
  par::parallel_for(K, [&](std::size_t i) {
    const long t = k.support[i];
    const long L = N - t;
    const double w_down = static_cast<double>(t) * (t - 1) / pairs;
    const double w_up = static_cast<double>(L) * (L - 1) / pairs;
    k.down[i] = t >= 2 ? w_down * accept_down(p, N, t) : 0.0;
    k.up[i] = L >= 2 ? w_up * accept_up(p, N, t) : 0.0;
    k.stay[i] = 1.0 - k.down[i] - k.up[i];
  });
  return k;
}

double kernel_conditional_moment(const PairKernel& kernel, long t, int k) {
  if (k != 1 && k != 2) throw usage_error("kernel_conditional_moment: k must be 1 or 2");
  const long t0 = kernel.support.front();
  if (t < t0 || t > kernel.N || (t - t0) % 2 != 0)
    throw usage_error("kernel_conditional_moment: inadmissible count");
  const std::size_t i = static_cast<std::size_t>((t - t0) / 2);
  return k == 1 ? 2.0 * (kernel.down[i] - kernel.up[i])
                : 4.0 * (kernel.down[i] + kernel.up[i]);
}

SteinDiagnostics stein_terms(const ModelParams& p, long N, int k, double m0) {
  require_N(N);
  if (k != 0 && k != 1) throw usage_error("stein_terms: k must be 0 or 1");
  if (!(m0 >= 0.0 && m0 <= 1.0)) throw usage_error("stein_terms: need m0 in [0,1]");
  if (std::abs(fixed_point_residual(m0, p)) > 1e-6)
    throw usage_error("stein_terms: m0 is not a maximizer");
  if (k == 0) {
    if (!(1.0 - 2.0 * p.J * g_prime(tau(m0, p)) > 1e-8))
      throw usage_error("stein_terms: k=0 needs a non-degenerate maximizer");
  } else {
    if (std::abs(p_tilde_deriv(m0, p, 2)) > 1e-6 ||
        std::abs(p_tilde_deriv(m0, p, 3)) > 1e-6)
      throw usage_error("stein_terms: k=1 needs a tricritical point");
  }

  const double Nd = static_cast<double>(N);
  const double s = std::pow(Nd, (2.0 * k + 1.0) / (2.0 * k + 2.0));
  const double s2 = s * s;  // N^{(2k+1)/(k+1)}
  const double l2 = L2(m0, p);
  const double coef = L1_deriv(m0, p, 2 * k + 1) / ((k == 0 ? 1.0 : 6.0) * s2);

  const ExactDistribution dist = exact_distribution(p, N);
  const PairKernel kernel = lumped_kernel(p, N);
  const std::size_t K = dist.support.size();

  SteinDiagnostics d;
  d.N = N;
  d.k = k;
  d.c0 = 2.0 * s2 / l2;

  const auto w_of = [&](std::size_t i) {
    return (static_cast<double>(dist.support[i]) - Nd * m0) / s;
  };
  const auto r_of = [&](std::size_t i) {
    const double drift = 2.0 * (kernel.down[i] - kernel.up[i]) / s;
    return drift - coef * ipow(w_of(i), 2 * k + 1);
  };

  d.term_variance = par::block_sum(K, [&](std::size_t i) {
    const double d2 = 4.0 * (kernel.down[i] + kernel.up[i]) / s2;
    return std::exp(dist.log_probs[i]) * std::abs(1.0 - 0.5 * d.c0 * d2);
  });
  d.term_remainder = par::block_sum(K, [&](std::size_t i) {
    return std::exp(dist.log_probs[i]) * std::abs(r_of(i));
  });
  const double n_rate = std::pow(Nd, 1.0 / (2.0 * k + 2.0));
  d.scaled_variance = d.term_variance * n_rate;
  d.scaled_remainder = d.term_remainder * n_rate;

  const double r_rate = std::pow(Nd, (4.0 * k + 3.0) / (2.0 * k + 2.0));
  d.fitted_c = par::block_max(K, [&](std::size_t i) {
    return std::abs(r_of(i)) * r_rate / (ipow(w_of(i), 2 * k + 2) + 1.0);
  });
  return d;
}

double tail_mass(const ExactDistribution& dist, double m_ref, double delta) {
  return tail_mass(dist, std::vector<double>{m_ref}, delta);
}

double tail_mass(const ExactDistribution& dist, const std::vector<double>& m_refs,
                 double delta) {
  if (m_refs.empty()) throw usage_error("tail_mass: need at least one reference");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw usage_error("tail_mass: need delta >= 0");
  for (double r : m_refs)
    if (!std::isfinite(r)) throw usage_error("tail_mass: non-finite reference");
  const double Nd = static_cast<double>(dist.N);
  return par::block_sum(dist.support.size(), [&](std::size_t i) {
    const double m = static_cast<double>(dist.support[i]) / Nd;
    double dmin = std::numeric_limits<double>::infinity();
    for (double r : m_refs) dmin = std::min(dmin, std::abs(m - r));
    return dmin >= delta ? std::exp(dist.log_probs[i]) : 0.0;
  });
}

}  // namespace imd
