#pragma once
// Phase portrait of the mean-field variational problem: locate the global
// maximizers of p_tilde over [0,1], classify the parameter point, and trace
// the first-order coexistence curve h = gamma(J) for J above the tricritical
// coupling.

#include <vector>

#include "imd/model.hpp"

namespace imd {

enum class PhaseKind {
  kUnique,        // one global maximizer
  kCriticalPair,  // two distinct global maximizers (first-order coexistence)
  kTricritical,   // degenerate maximizer: p'' = p''' = 0 at the maximum
};

struct Maximizer {
  double m;       // location in [0,1]
  double value;   // p_tilde(m)
  double lambda;  // limiting variance -1/p_tilde''(m); NaN when degenerate
};

struct PhasePortrait {
  PhaseKind kind;
  std::vector<Maximizer> maximizers;  // ascending in m; global maximizers only
  ModelParams params;
};

// All global maximizers of m -> p_tilde(m; p), found by a sign-change scan of
// the fixed-point residual m - g(tau(m)) on a uniform grid followed by
// safeguarded Newton refinement.  Locations within tol of each other are
// merged.  grid_n is the number of scan cells.
std::vector<Maximizer> find_maximizers(const ModelParams& p,
                                       double tol = 1e-12,
                                       int grid_n = 4096);

// Classify the parameter point.  tol_equal decides when two maximizer values
// tie (critical pair); tol_tri decides when p'' and p''' both vanish at a
// unique maximizer (tricritical).  Points within 1e-6 of the exact
// tricritical point are snapped onto it, since the cube-root geometry there
// defeats generic root refinement.
PhasePortrait classify(const ModelParams& p,
                       double tol_equal = 1e-12,
                       double tol_tri = 1e-6,
                       int grid_n = 4096);

// The coexistence field gamma(J): the unique h at which the two local
// branches of p_tilde attain equal heights.  Requires J > J_c + 1e-4; the
// search window is centered on the tangent-line prediction from the
// tricritical point and widened on demand.  Throws window_error if a bracket
// cannot be established.
double critical_h(double J, double tol = 1e-12);

}  // namespace imd
