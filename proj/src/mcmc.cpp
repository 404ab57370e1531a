#include "imd/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "imd/errors.hpp"

namespace imd {

Chain::Chain(const PairKernel& kernel, Mode mode, Rng rng)
    : N_(kernel.N),
      mode_(mode),
      t_min_(kernel.support.front()),
      down_(kernel.down),
      up_(kernel.up),
      rng_(rng) {
  if (mode_ == Mode::kFull) {
    const std::size_t K = kernel.support.size();
    acc_down_.resize(K);
    acc_up_.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
      acc_down_[i] = accept_down(kernel.params, N_, kernel.support[i]);
      acc_up_[i] = accept_up(kernel.params, N_, kernel.support[i]);
    }
  }
  set_count(N_);  // all-monomer start: the empty dimer configuration
}

void Chain::restrict(double xi, Side side) {
  if (!(xi > 0.0 && xi < 1.0)) throw usage_error("Chain::restrict: need xi in (0,1)");
  restricted_ = true;
  xi_ = xi;
  side_ = side;
  // Start at the admissible count nearest the boundary inside the side.
  long start = -1;
  if (side == Side::kBelow) {
    for (long t = N_; t >= t_min_; t -= 2)
      if (count_on_side(t, N_, xi, side)) { start = t; break; }
  } else {
    for (long t = t_min_; t <= N_; t += 2)
      if (count_on_side(t, N_, xi, side)) { start = t; break; }
  }
  if (start < 0)
    throw empty_condition_error("Chain::restrict: selected side has no admissible counts");
  set_count(start);
}

void Chain::set_count(long t) {
  if (t < t_min_ || t > N_ || (t - t_min_) % 2 != 0)
    throw usage_error("Chain::set_count: inadmissible count");
  if (restricted_ && !count_on_side(t, N_, xi_, side_))
    throw usage_error("Chain::set_count: count outside the restricted side");
  t_ = t;
  if (mode_ == Mode::kFull) {
    // canonical configuration: first t sites are monomers; the count process
    // is insensitive to which sites carry them
    sigma_.assign(static_cast<std::size_t>(N_), 0);
    std::fill(sigma_.begin(), sigma_.begin() + t, 1);
  }
}

bool Chain::allowed(long t_next) const {
  if (t_next < t_min_ || t_next > N_) return false;
  if (restricted_ && !count_on_side(t_next, N_, xi_, side_)) return false;
  return true;
}

void Chain::step() {
  ++steps_;
  if (mode_ == Mode::kLumped) {
    // one variate per step: [0,down) flips down, [down,down+up) flips up
    const double r = rng_.next_double();
    const std::size_t i = index();
    if (r < down_[i]) {
      if (allowed(t_ - 2)) { t_ -= 2; ++downs_; }
    } else if (r < down_[i] + up_[i]) {
      if (allowed(t_ + 2)) { t_ += 2; ++ups_; }
    }
    return;
  }
  // FULL: three variates per step, always (pair draw twice, acceptance once)
  const auto u = static_cast<std::size_t>(rng_.next_below(static_cast<std::uint64_t>(N_)));
  const auto w = static_cast<std::size_t>(rng_.next_below(static_cast<std::uint64_t>(N_ - 1)));
  const std::size_t v = w + (w >= u ? 1 : 0);
  const double r = rng_.next_double();
  if (sigma_[u] && sigma_[v]) {
    if (r < acc_down_[index()] && allowed(t_ - 2)) {
      sigma_[u] = sigma_[v] = 0;
      t_ -= 2;
      ++downs_;
    }
  } else if (!sigma_[u] && !sigma_[v]) {
    if (r < acc_up_[index()] && allowed(t_ + 2)) {
      sigma_[u] = sigma_[v] = 1;
      t_ += 2;
      ++ups_;
    }
  } else if (r < 0.5) {
    std::swap(sigma_[u], sigma_[v]);  // mixed pair: count unchanged
    ++swaps_;
  }
}

namespace {

void validate(const SamplerConfig& cfg) {
  b_field(cfg.params, cfg.N);  // validates params and N >= 1
  if (cfg.N < 2) throw usage_error("run: need N >= 2");
  if (cfg.N > kMaxExactN) throw usage_error("run: N exceeds the 10^6 ceiling");
  if (!(cfg.steps > cfg.burn_in && cfg.burn_in >= 0))
    throw usage_error("run: need steps > burn_in >= 0");
  if (cfg.thinning < 1) throw usage_error("run: need thinning >= 1");
  if (cfg.chains < 1) throw usage_error("run: need chains >= 1");
  if (cfg.restricted && !(cfg.xi > 0.0 && cfg.xi < 1.0))
    throw usage_error("run: need xi in (0,1)");
}

}  // namespace

TraceSummary run(const SamplerConfig& cfg) {
  validate(cfg);
  const PairKernel kernel = lumped_kernel(cfg.params, cfg.N);
  const std::size_t K = kernel.support.size();
  const int C = cfg.chains;

  std::vector<std::vector<long long>> hist(static_cast<std::size_t>(C),
                                           std::vector<long long>(K, 0));
  std::vector<std::vector<long>> samples(static_cast<std::size_t>(C));
  std::vector<long> finals(static_cast<std::size_t>(C), 0);
  std::vector<long long> downs(static_cast<std::size_t>(C), 0),
      ups(static_cast<std::size_t>(C), 0), swaps(static_cast<std::size_t>(C), 0);

  // one restricted chain probes side emptiness up front, outside the parallel
  // region, so the error surfaces cleanly
  if (cfg.restricted) {
    Chain probe(kernel, cfg.mode, chain_rng(cfg.seed, 0));
    probe.restrict(cfg.xi, cfg.side);
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (int c = 0; c < C; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    Chain ch(kernel, cfg.mode, chain_rng(cfg.seed, static_cast<std::uint64_t>(c)));
    if (cfg.restricted) ch.restrict(cfg.xi, cfg.side);
    std::vector<long long>& h = hist[ci];
    std::vector<long>& smp = samples[ci];
    smp.reserve(static_cast<std::size_t>((cfg.steps - cfg.burn_in) / cfg.thinning + 1));
    const long t_min = kernel.support.front();
    for (long s = 1; s <= cfg.steps; ++s) {
      ch.step();
      if (s <= cfg.burn_in) continue;
      const long t = ch.count();
      ++h[static_cast<std::size_t>((t - t_min) / 2)];
      if ((s - cfg.burn_in - 1) % cfg.thinning == 0) smp.push_back(t);
    }
    finals[ci] = ch.count();
    downs[ci] = ch.downs();
    ups[ci] = ch.ups();
    swaps[ci] = ch.swaps();
  }

  // deterministic merge in chain-index order
  TraceSummary out;
  out.cfg = cfg;
  std::vector<long long> total(K, 0);
  for (int c = 0; c < C; ++c)
    for (std::size_t i = 0; i < K; ++i) total[i] += hist[static_cast<std::size_t>(c)][i];
  long long grand = 0;
  for (std::size_t i = 0; i < K; ++i) grand += total[i];
  for (std::size_t i = 0; i < K; ++i) {
    const long t = kernel.support[i];
    if (cfg.restricted && !count_on_side(t, cfg.N, cfg.xi, cfg.side)) continue;
    out.support.push_back(t);
    out.counts.push_back(total[i]);
    out.empirical.push_back(static_cast<double>(total[i]) / static_cast<double>(grand));
  }
  for (int c = 0; c < C; ++c) {
    const auto& smp = samples[static_cast<std::size_t>(c)];
    out.samples.insert(out.samples.end(), smp.begin(), smp.end());
  }
  out.final_counts = finals;
  long long d = 0, u = 0, sw = 0;
  for (int c = 0; c < C; ++c) {
    d += downs[static_cast<std::size_t>(c)];
    u += ups[static_cast<std::size_t>(c)];
    sw += swaps[static_cast<std::size_t>(c)];
  }
  const double steps_total = static_cast<double>(cfg.steps) * C;
  out.frac_down = static_cast<double>(d) / steps_total;
  out.frac_up = static_cast<double>(u) / steps_total;
  out.frac_swap = static_cast<double>(sw) / steps_total;
  out.frac_stay = 1.0 - out.frac_down - out.frac_up - out.frac_swap;
  return out;
}

TraceSummary conditional_run(const SamplerConfig& cfg) {
  if (!cfg.restricted)
    throw usage_error("conditional_run: config must carry the xi restriction");
  return run(cfg);
}

double tv_distance(const TraceSummary& summary, const ExactDistribution& exact) {
  if (summary.cfg.N != exact.N) throw usage_error("tv_distance: mismatched N");
  double tv = 0.0;
  std::size_t j = 0;  // walks the summary support (both ascending)
  for (std::size_t i = 0; i < exact.support.size(); ++i) {
    while (j < summary.support.size() && summary.support[j] < exact.support[i]) {
      tv += summary.empirical[j];  // empirical atom outside the exact support
      ++j;
    }
    double emp = 0.0;
    if (j < summary.support.size() && summary.support[j] == exact.support[i]) {
      emp = summary.empirical[j];
      ++j;
    }
    tv += std::abs(emp - exact.prob(i));
  }
  for (; j < summary.support.size(); ++j) tv += summary.empirical[j];
  return 0.5 * tv;
}

}  // namespace imd
