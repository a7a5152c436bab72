#pragma once

#include <cmath>

namespace hdpmean {

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
/// Shrinks the bracket until hi - lo <= rel_tol * max(|hi|, floor), then
/// returns the best of {lo, midpoint, hi} so minima at the interval
/// endpoints are hit exactly.
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double rel_tol) {
  if (hi <= lo) return lo;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  // The iteration cap guards brackets collapsing onto 0, where a purely
  // relative width test would never fire.
  for (int iter = 0; iter < 220 && b - a > rel_tol * std::max(std::abs(b), 1e-300);
       ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  double best = mid, fbest = f(mid);
  if (const double flo = f(lo); flo < fbest) {
    best = lo;
    fbest = flo;
  }
  if (const double fhi = f(hi); fhi < fbest) {
    best = hi;
  }
  return best;
}

}  // namespace hdpmean
