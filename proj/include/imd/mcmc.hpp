#pragma once
// The exchangeable-pair dynamics as a runnable sampler.  One step draws an
// unordered site pair: a monomer pair may flip down (both to dimer-covered),
// an empty pair may flip up, a mixed pair swaps with probability 1/2 (count
// unchanged).  FULL mode tracks the whole configuration bit-vector; LUMPED
// mode walks the count lattice with the analytic kernel row, which is the
// exact law of the count under the full dynamics.
//
// Determinism contract: FULL consumes exactly 3 uniform variates per step
// (pair draw twice, accept once), LUMPED exactly 1, on every step including
// rejections.  Chain c uses its own generator seeded by splitmix64(seed + c),
// and summaries merge in chain-index order, so results are independent of
// execution parallelism.

#include <cstdint>
#include <vector>

#include "imd/exact.hpp"
#include "imd/model.hpp"
#include "imd/rng.hpp"

namespace imd {

enum class Mode { kFull, kLumped };

struct SamplerConfig {
  ModelParams params;
  long N = 0;
  Mode mode = Mode::kLumped;
  long steps = 0;        // total steps per chain, burn-in included
  long burn_in = 0;
  long thinning = 1;     // stride for retained samples
  int chains = 1;
  std::uint64_t seed = 1;
  bool restricted = false;  // reject moves crossing xi
  double xi = 0;
  Side side = Side::kBelow;
};

struct TraceSummary {
  SamplerConfig cfg;
  std::vector<long> support;       // count lattice (restricted: side only)
  std::vector<long long> counts;   // post-burn-in visit counts per support t
  std::vector<double> empirical;   // counts normalized
  std::vector<long> samples;       // thinned counts, pooled in chain order
  std::vector<long> final_counts;  // last state per chain
  double frac_down = 0, frac_up = 0, frac_swap = 0, frac_stay = 0;
};

// A single chain; public so tests can drive individual steps (kernel-row
// chi-square, transition symmetry).
class Chain {
 public:
  Chain(const PairKernel& kernel, Mode mode, Rng rng);

  // Restrict to one side of xi by rejecting crossing proposals; resets the
  // state to the admissible count nearest the boundary inside the side.
  void restrict(double xi, Side side);

  void set_count(long t);  // teleport; t must be admissible (and in-side)
  long count() const { return t_; }
  void step();

  long long downs() const { return downs_; }
  long long ups() const { return ups_; }
  long long swaps() const { return swaps_; }
  long long steps_taken() const { return steps_; }

 private:
  bool allowed(long t_next) const;
  std::size_t index() const { return static_cast<std::size_t>((t_ - t_min_) / 2); }

  long N_;
  Mode mode_;
  long t_min_;
  std::vector<double> down_, up_;          // lumped rows
  std::vector<double> acc_down_, acc_up_;  // per-pair acceptances (FULL)
  std::vector<std::uint8_t> sigma_;        // FULL configuration
  long t_ = 0;
  Rng rng_;
  bool restricted_ = false;
  double xi_ = 0;
  Side side_ = Side::kBelow;
  long long downs_ = 0, ups_ = 0, swaps_ = 0, steps_ = 0;
};

// Run cfg.chains independent chains and merge deterministically.
TraceSummary run(const SamplerConfig& cfg);

// run() with the xi-restriction required; errors if the side is empty.
TraceSummary conditional_run(const SamplerConfig& cfg);

// Total-variation distance between the empirical counts and the exact law.
double tv_distance(const TraceSummary& summary, const ExactDistribution& exact);

}  // namespace imd
