// Times the OpenMP-blocked reductions against the serial references, and the
// exact-distribution build that sits on top of them.  Wall-clock only; the
// correctness comparison lives in the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "imd/exact.hpp"
#include "imd/model.hpp"
#include "imd/parallel.hpp"
#include "imd/reference.hpp"
#include "imd/rng.hpp"

using namespace imd;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

template <class F>
double time_ms(int reps, F&& f) {
  volatile double sink = 0.0;  // defeat dead-code elimination
  const double t0 = now_ms();
  for (int r = 0; r < reps; ++r) sink = sink + f();
  const double t1 = now_ms();
  (void)sink;
  return (t1 - t0) / reps;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n");
#endif

  const std::size_t n = 4000000;
  Rng rng(99);
  std::vector<double> x(n);
  for (double& v : x) v = 2.0 * rng.next_double() - 1.0;
  const auto f = [&](std::size_t i) { return x[i]; };
  const int reps = 20;

  const double sum_par = time_ms(reps, [&] { return par::block_sum(n, f); });
  const double sum_ser = time_ms(reps, [&] { return ref::serial_sum(n, f); });
  std::printf("sum         n=%zu   parallel %8.3f ms   serial %8.3f ms   speedup %.2fx\n",
              n, sum_par, sum_ser, sum_ser / sum_par);

  const double lse_par = time_ms(reps, [&] { return par::logsumexp(x); });
  const double lse_ser = time_ms(reps, [&] { return ref::serial_logsumexp(x); });
  std::printf("logsumexp   n=%zu   parallel %8.3f ms   serial %8.3f ms   speedup %.2fx\n",
              n, lse_par, lse_ser, lse_ser / lse_par);

  const ModelParams p{0.5, 0.0};
  const long N = 500000;
  const double dist_ms = time_ms(5, [&] {
    const ExactDistribution d = exact_distribution(p, N);
    return d.log_probs.back();
  });
  std::printf("exact dist  N=%ld   %8.3f ms per build\n", N, dist_ms);

  const long Nks = 100000;
  const ExactDistribution d = exact_distribution(p, Nks);
  const double m0 = d.mean_m();
  const LimitLaw law = LimitLaw::gaussian(1.0);
  const double ks_ms = time_ms(3, [&] { return ks_distance(d, m0, 0.5, law); });
  std::printf("ks distance N=%ld   %8.3f ms per evaluation\n", Nks, ks_ms);
  return 0;
}
