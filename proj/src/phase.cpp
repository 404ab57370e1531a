#include "imd/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "imd/errors.hpp"
#include "imd/parallel.hpp"

namespace imd {

namespace {

constexpr double kTinyJ = 1e-14;
constexpr double kSnapRadius = 1e-6;   // box radius around the tricritical point
constexpr double kResidualTol = 1e-13;
constexpr double kDedup = 1e-7;
constexpr int kMaxIter = 200;

double nan_d() { return std::numeric_limits<double>::quiet_NaN(); }

// lambda = g'/(1 - 2J g') when the maximizer is non-degenerate, NaN otherwise.
// Avoids the throwing accessor so degenerate points can still be reported.
double lambda_or_nan(double m, const ModelParams& p) {
  const double gp = g_prime(tau(m, p));
  const double denom = 1.0 - 2.0 * p.J * gp;
  if (denom <= 1e-12) return nan_d();
  return gp / denom;
}

bool in_snap_box(const ModelParams& p) {
  const TricriticalPoint& tc = tricritical();
  return std::abs(p.J - tc.J_c) <= kSnapRadius && std::abs(p.h - tc.h_c) <= kSnapRadius;
}

// Safeguarded Newton for the root of r(m) = m - g(tau(m)) inside [lo, hi],
// where r(lo) < 0 <= r(hi).  Newton steps leaving the bracket fall back to
// bisection, so the triple-root geometry near the tricritical point only
// slows convergence instead of breaking it.
double refine_root(const ModelParams& p, double lo, double hi) {
  double m = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxIter; ++it) {
    const double r = fixed_point_residual(m, p);
    if (std::abs(r) <= kResidualTol) return m;
    if (r < 0) lo = m; else hi = m;
    if (hi - lo <= 4e-16 * std::max(1.0, std::abs(m))) break;
    const double rp = 1.0 - 2.0 * p.J * g_prime(tau(m, p));
    double next = (rp > 0) ? m - r / rp : nan_d();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    m = next;
  }
  return m;
}

// All local maxima of p_tilde in (0,1): downward crossings of p_tilde', i.e.
// sign changes of the residual from negative to non-negative.  r(0) < 0 and
// r(1) > 0 always hold, so at least one maximum exists and the boundary never
// carries one.
std::vector<Maximizer> local_maxima(const ModelParams& p, int grid_n) {
  if (grid_n < 16) throw usage_error("phase: grid_n too small");
  const std::size_t n = static_cast<std::size_t>(grid_n) + 1;
  std::vector<double> r(n);
  par::parallel_for(n, [&](std::size_t i) {
    r[i] = fixed_point_residual(static_cast<double>(i) / grid_n, p);
  });

  std::vector<Maximizer> out;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(r[i] < 0 && r[i + 1] >= 0)) continue;
    const double m = refine_root(p, static_cast<double>(i) / grid_n,
                                 static_cast<double>(i + 1) / grid_n);
    if (!out.empty() && std::abs(m - out.back().m) <= kDedup) continue;
    out.push_back({m, p_tilde(m, p), lambda_or_nan(m, p)});
  }
  if (out.empty()) throw numerical_error("phase: no maximizer found on grid");
  return out;
}

}  // namespace

std::vector<Maximizer> find_maximizers(const ModelParams& p, double tol, int grid_n) {
  if (!(tol > 0)) throw usage_error("find_maximizers: need tol > 0");
  tau(0.5, p);  // validate params before entering parallel regions

  if (in_snap_box(p)) {
    const TricriticalPoint& tc = tricritical();
    return {{tc.m_c, p_tilde(tc.m_c, p), lambda_or_nan(tc.m_c, p)}};
  }
  if (p.J <= kTinyJ) {
    // At J = 0 the tilted functional is flat; the meaningful limit point is
    // the fixed point m = g(h), which the residual scan also produces.
    const double m = g_of(p.h);
    return {{m, p_tilde(m, p), lambda_or_nan(m, p)}};
  }

  std::vector<Maximizer> cand = local_maxima(p, grid_n);
  if (cand.size() > 2)
    throw numerical_error("find_maximizers: more than two candidate maxima");

  double vmax = -std::numeric_limits<double>::infinity();
  for (const Maximizer& c : cand) vmax = std::max(vmax, c.value);
  std::vector<Maximizer> out;
  for (const Maximizer& c : cand)
    if (c.value >= vmax - tol) out.push_back(c);
  return out;  // local_maxima emits in ascending m already
}

PhasePortrait classify(const ModelParams& p, double tol_equal, double tol_tri, int grid_n) {
  if (!(tol_equal > 0) || !(tol_tri > 0))
    throw usage_error("classify: need positive tolerances");

  PhasePortrait out;
  out.params = p;

  if (in_snap_box(p)) {
    const TricriticalPoint& tc = tricritical();
    out.kind = PhaseKind::kTricritical;
    out.maximizers = {{tc.m_c, p_tilde(tc.m_c, p), -p_tilde_deriv(tc.m_c, p, 4)}};
    return out;
  }

  out.maximizers = find_maximizers(p, tol_equal, grid_n);
  if (out.maximizers.size() == 2) {
    out.kind = PhaseKind::kCriticalPair;
    return out;
  }

  Maximizer& m0 = out.maximizers.front();
  if (p.J > kTinyJ) {
    // J = 0 has p'' = p''' = 0 identically (flat functional), which must not
    // masquerade as tricritical; the derivative test only applies for J > 0.
    const double d2 = p_tilde_deriv(m0.m, p, 2);
    const double d3 = p_tilde_deriv(m0.m, p, 3);
    if (std::abs(d2) <= tol_tri && std::abs(d3) <= tol_tri) {
      out.kind = PhaseKind::kTricritical;
      m0.lambda = -p_tilde_deriv(m0.m, p, 4);
      return out;
    }
  }
  out.kind = PhaseKind::kUnique;
  m0.lambda = lambda_variance(m0.m, p);
  return out;
}

namespace {

// Location of the grid argmax of p_tilde at field h; used only to detect the
// first-order jump of the global maximizer across gamma(J).
double coarse_argmax_m(double J, double h, int grid_n) {
  const ModelParams p{J, h};
  const std::size_t n = static_cast<std::size_t>(grid_n) + 1;
  std::vector<double> v(n);
  par::parallel_for(n, [&](std::size_t i) {
    v[i] = p_tilde(static_cast<double>(i) / grid_n, p);
  });
  const std::size_t a = par::block_argmax(n, [&](std::size_t i) { return v[i]; });
  return static_cast<double>(a) / grid_n;
}

// Signed height gap between the upper and lower local-maximum branches at
// field h.  When only one branch exists the gap saturates to +-1, signed by
// which side of m_ref the survivor sits on; real gaps near gamma are orders
// of magnitude smaller, so the sentinel only steers the bisection inward.
// is_pair reports whether both branches were actually present.
double branch_gap(double J, double h, double m_ref, int grid_n, bool& is_pair) {
  const ModelParams p{J, h};
  const std::vector<Maximizer> mx = local_maxima(p, grid_n);
  is_pair = mx.size() >= 2;
  if (is_pair) return mx.back().value - mx.front().value;
  return mx.front().m > m_ref ? 1.0 : -1.0;
}

}  // namespace

double critical_h(double J, double tol) {
  if (!std::isfinite(J)) throw usage_error("critical_h: non-finite J");
  if (!(tol > 0)) throw usage_error("critical_h: need tol > 0");
  const TricriticalPoint& tc = tricritical();
  const double margin = 1e-4;
  if (!(J > tc.J_c + margin))
    throw usage_error("critical_h: need J > J_c + 1e-4");

  constexpr int kScanPoints = 256;   // h-grid cells per window attempt
  constexpr int kCoarseGrid = 2048;  // m-grid for the jump detector
  constexpr int kFineGrid = 4096;    // m-grid for branch refinement

  // The maximizer jump across gamma shrinks like sqrt(J - J_c) out of the
  // tricritical point, so the detection threshold must shrink with it.
  const double jump_min =
      std::min(0.05, std::max(0.005, 0.5 * std::sqrt(J - tc.J_c)));

  // Window centered on the tangent-line continuation of gamma out of the
  // tricritical point (slope 1 - 2 m_c), widened geometrically on misses.
  const double h0 = tc.h_c + (1.0 - 2.0 * tc.m_c) * (J - tc.J_c);
  double half = 0.25 + 0.25 * (J - tc.J_c);

  double lo = 0, hi = 0, m_lo = 0, m_hi = 0, step = 0;
  bool found = false;
  for (int attempt = 0; attempt < 6 && !found; ++attempt) {
    step = 2.0 * half / kScanPoints;
    std::vector<double> am(kScanPoints + 1);
    for (int i = 0; i <= kScanPoints; ++i)
      am[static_cast<std::size_t>(i)] = coarse_argmax_m(J, h0 - half + step * i, kCoarseGrid);
    double best = jump_min;
    for (int i = 0; i < kScanPoints; ++i) {
      const double jump = am[static_cast<std::size_t>(i + 1)] - am[static_cast<std::size_t>(i)];
      if (jump > best) {
        best = jump;
        lo = h0 - half + step * i;
        hi = lo + step;
        m_lo = am[static_cast<std::size_t>(i)];
        m_hi = am[static_cast<std::size_t>(i + 1)];
        found = true;
      }
    }
    if (!found) half *= 2.0;
  }
  if (!found)
    throw window_error("critical_h: no maximizer jump at J=" + std::to_string(J) +
                       " in h-window " + std::to_string(h0 - half) + ".." +
                       std::to_string(h0 + half));

  // d(h) = p(upper branch) - p(lower branch) increases in h (its h-derivative
  // is m2 - m1 > 0), so gamma is the unique sign change of the gap.
  const double m_ref = 0.5 * (m_lo + m_hi);
  bool pair_lo = false, pair_hi = false, saw_pair = false;
  double g_lo = branch_gap(J, lo, m_ref, kFineGrid, pair_lo);
  double g_hi = branch_gap(J, hi, m_ref, kFineGrid, pair_hi);
  if (!(g_lo < 0 && g_hi > 0)) {
    lo -= step;  // the scan cell can clip the crossing; pad once and re-check
    hi += step;
    g_lo = branch_gap(J, lo, m_ref, kFineGrid, pair_lo);
    g_hi = branch_gap(J, hi, m_ref, kFineGrid, pair_hi);
    if (!(g_lo < 0 && g_hi > 0))
      throw window_error("critical_h: bracket lost orientation at J=" + std::to_string(J));
  }
  saw_pair = pair_lo || pair_hi;

  for (int it = 0; it < kMaxIter; ++it) {
    const double mid = 0.5 * (lo + hi);
    bool pair_mid = false;
    const double g_mid = branch_gap(J, mid, m_ref, kFineGrid, pair_mid);
    saw_pair = saw_pair || pair_mid;
    if (pair_mid && std::abs(g_mid) <= 0.25 * tol) return mid;
    if (g_mid < 0) lo = mid; else hi = mid;
    if (hi - lo <= 4e-16 * std::max(1.0, std::abs(mid))) {
      if (!saw_pair)
        throw window_error("critical_h: no two-branch field found near h=" +
                           std::to_string(mid));
      // Just above J_c the gap slope m2 - m1 is tiny, so value equality below
      // tol may be impossible to certify even though the crossing field is
      // pinned to machine precision; the collapsed bracket is the answer.
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace imd
