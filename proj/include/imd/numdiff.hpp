#pragma once
#include <cmath>

// Richardson-extrapolated central differences (two extrapolation levels,
// step halving). Used for derivative orders that have no closed form.

namespace imd {

template <class F>
double richardson_first(F&& f, double x, double h0) {
  auto d = [&](double h) { return (f(x + h) - f(x - h)) / (2.0 * h); };
  const double a0 = d(h0), a1 = d(0.5 * h0), a2 = d(0.25 * h0);
  const double b0 = (4.0 * a1 - a0) / 3.0, b1 = (4.0 * a2 - a1) / 3.0;
  return (16.0 * b1 - b0) / 15.0;
}

template <class F>
double richardson_second(F&& f, double x, double h0) {
  const double fx = f(x);
  auto d = [&](double h) { return (f(x + h) - 2.0 * fx + f(x - h)) / (h * h); };
  const double a0 = d(h0), a1 = d(0.5 * h0), a2 = d(0.25 * h0);
  const double b0 = (4.0 * a1 - a0) / 3.0, b1 = (4.0 * a2 - a1) / 3.0;
  return (16.0 * b1 - b0) / 15.0;
}

}  // namespace imd
