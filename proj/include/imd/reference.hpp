#pragma once
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

// Serial reference implementations of the kernels in parallel.hpp.  These are
// the "obvious" left-to-right loops; the test suite checks that the blocked
// parallel versions agree with them (to rounding for sums, exactly for
// max/argmax) and that the parallel versions give bit-identical results for
// any thread count.  The bench target times one against the other.

namespace imd::ref {

template <class F>
double serial_sum(std::size_t n, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += f(i);
  return s;
}

template <class F>
double serial_max(std::size_t n, F&& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(i));
  return m;
}

template <class F>
std::size_t serial_argmax(std::size_t n, F&& f) {
  std::size_t a = 0;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(i);
    if (v > m) { m = v; a = i; }
  }
  return a;
}

inline double serial_logsumexp(const std::vector<double>& x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = serial_max(x.size(), [&](std::size_t i) { return x[i]; });
  if (!std::isfinite(m)) return m;
  const double s =
      serial_sum(x.size(), [&](std::size_t i) { return std::exp(x[i] - m); });
  return m + std::log(s);
}

}  // namespace imd::ref
