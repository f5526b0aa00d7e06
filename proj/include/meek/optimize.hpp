#pragma once

#include <cmath>

#include "meek/errors.hpp"

namespace meek {

struct GoldenResult {
  double x;
  double fx;
};

// Golden-section maximization of a unimodal function on [lo, hi];
// shrinks the bracket until its width falls below tol.
template <class F>
GoldenResult golden_section_max(F&& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw DomainError("golden_section_max: empty bracket");
  if (!(tol > 0.0)) throw DomainError("golden_section_max: tol must be > 0");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

// Bisection root-finding on [lo, hi]; requires a sign change (or an
// exact zero at an endpoint).
template <class F>
double bisect_root(F&& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw DomainError("bisect_root: empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw DomainError("bisect_root: no sign change on bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace meek
