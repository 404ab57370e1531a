#pragma once
// Exact finite-N engine on the monomer-count lattice.  The Gibbs weight of a
// configuration depends only on its monomer count t, so the distribution of
// the count is computed exactly in O(N): weight(t) = C(N,t) * (#perfect
// matchings on the N-t covered sites) * exp(J t^2/N + b t) with
// b = (log N)/2 + h - J.  Everything runs in log space.

#include <cstdint>
#include <vector>

#include "imd/laws.hpp"
#include "imd/model.hpp"

namespace imd {

inline constexpr long kMaxExactN = 1000000;  // practical ceiling, documented

enum class Side { kBelow, kAbove };

struct ExactDistribution {
  long N = 0;
  ModelParams params;
  std::vector<long> support;       // admissible counts, ascending, N - t even
  std::vector<double> log_probs;   // normalized: logsumexp == 0

  double prob(std::size_t i) const;
  double mean_m() const;           // E[t/N]
};

struct PairKernel {
  long N = 0;
  ModelParams params;
  std::vector<long> support;               // same lattice as ExactDistribution
  std::vector<double> down, up, stay;      // per support entry; rows sum to 1
};

struct SteinDiagnostics {
  long N = 0;
  int k = 0;                 // 0 off-critical (sqrt N), 1 tricritical (N^{3/4})
  double c0 = 0;             // 2 N^{(2k+1)/(k+1)} / L2(m0)
  double term_variance = 0;  // E|1 - (c0/2) E[Delta^2 | W]|
  double term_remainder = 0; // E|r(W)|
  double scaled_variance = 0;   // term_variance  * N^{1/(2k+2)}
  double scaled_remainder = 0;  // term_remainder * N^{1/(2k+2)}
  double fitted_c = 0;       // max |r| * N^{(4k+3)/(2k+2)} / (W^{2k+2} + 1)
};

// log( L! / ((L/2)! 2^{L/2}) ), the number of perfect matchings on L labeled
// vertices; L must be even and >= 0.
double dimer_count_log_weight(long L);

ExactDistribution exact_distribution(const ModelParams& p, long N);

// Raw free energy (1/N) log sum of unnormalized weights; grows like
// (log N)/2.  The normalized variant subtracts that drift and converges to
// sup p_tilde.
double free_energy(const ModelParams& p, long N);
double free_energy_normalized(const ModelParams& p, long N);

// Whether count t lies strictly on the given side of xi; the count with
// t/N = xi (up to rounding) is on neither side.  Shared by the conditional
// restriction and the sampler's boundary rejection.
bool count_on_side(long t, long N, double xi, Side side);

// Restriction to { t/N < xi } (kBelow) or { t/N > xi } (kAbove), renormalized.
// A count with t/N = xi (up to lattice rounding) belongs to neither side.
ExactDistribution conditional(const ExactDistribution& dist, double xi, Side side);

// E[ ((t - N center) / N^scale_exponent)^order ] over the exact distribution.
double moments(const ExactDistribution& dist, double center,
               double scale_exponent, int order);

// Exact Kolmogorov-Smirnov distance between the law of the scaled count and
// the limit law: the sup is attained at the atoms, checked from both sides.
double ks_distance(const ExactDistribution& dist, double center,
                   double scale_exponent, const LimitLaw& law);

// Per-pair acceptance probabilities of the two flipping moves from count t;
// shared between the lumped kernel and the full-configuration sampler.
double accept_down(const ModelParams& p, long N, long t);
double accept_up(const ModelParams& p, long N, long t);

PairKernel lumped_kernel(const ModelParams& p, long N);

// 2^k down(t) + (-2)^k up(t); equals U_k(t/N, 1/N) exactly.
double kernel_conditional_moment(const PairKernel& kernel, long t, int k);

// Stein exchangeable-pair diagnostics at scale s = N^{(2k+1)/(2k+2)}:
// W = (t - N m0)/s, E[Delta|W] and E[Delta^2|W] from the kernel row, the
// remainder r(W) = E[Delta|W] - g(W) against the polynomial drift g.
SteinDiagnostics stein_terms(const ModelParams& p, long N, int k, double m0);

// P(|m - m_ref| >= delta); the overload takes the distance to a set of
// reference points (min over refs), for two-phase portraits.
double tail_mass(const ExactDistribution& dist, double m_ref, double delta);
double tail_mass(const ExactDistribution& dist,
                 const std::vector<double>& m_refs, double delta);

}  // namespace imd
