#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

// OpenMP-parallel kernels with deterministic results: reductions are computed
// over fixed-size blocks whose boundaries do not depend on the thread count,
// and block partials are combined in index order.  Serial reference
// implementations live in imd::ref (reference.hpp); the benchmark target and
// the parallel test suite compare the two.

namespace imd::par {

inline constexpr std::size_t kBlock = 8192;

template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

// Deterministic blocked sum of f(0..n-1), independent of thread count.
template <class F>
double block_sum(std::size_t n, F&& f) {
  if (n == 0) return 0.0;
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  if (nb == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(i);
    return s;
  }
  std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double s = 0.0;
  for (std::size_t b = 0; b < nb; ++b) s += partial[b];
  return s;
}

// Maximum of f(0..n-1); max is exact so any combination order works.
template <class F>
double block_max(std::size_t n, F&& f) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nb, -std::numeric_limits<double>::infinity());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, f(i));
    partial[static_cast<std::size_t>(b)] = m;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b) m = std::max(m, partial[b]);
  return m;
}

// Index of the maximal value; ties resolved to the lowest index, matching the
// serial left-to-right scan exactly.
template <class F>
std::size_t block_argmax(std::size_t n, F&& f) {
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<std::size_t> arg(nb, 0);
  std::vector<double> val(nb, -std::numeric_limits<double>::infinity());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long b = 0; b < static_cast<long long>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    std::size_t a = lo;
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = f(i);
      if (v > m) { m = v; a = i; }
    }
    arg[static_cast<std::size_t>(b)] = a;
    val[static_cast<std::size_t>(b)] = m;
  }
  std::size_t a = 0;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < nb; ++b)
    if (val[b] > m) { m = val[b]; a = arg[b]; }
  return a;
}

// Deterministic log-sum-exp with single max shift.
inline double logsumexp(const std::vector<double>& x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = block_max(x.size(), [&](std::size_t i) { return x[i]; });
  if (!std::isfinite(m)) return m;
  const double s = block_sum(x.size(), [&](std::size_t i) { return std::exp(x[i] - m); });
  return m + std::log(s);
}

}  // namespace imd::par
