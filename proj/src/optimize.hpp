#pragma once

#include <cmath>
#include <utility>

namespace conedef::detail {

inline constexpr double kInvPhi = 0.6180339887498949;

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Returns (argmax, max). Ties keep the lower abscissa.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double tol) {
  auto [x, v] = golden_max([&](double t) { return -f(t); }, lo, hi, tol);
  return {x, -v};
}

/// Bisection on a predicate that is false at lo and true at hi. Returns the
/// transition point and stores the iteration count.
template <class Pred>
double bisect(Pred&& ok, double lo, double hi, double tol, int max_iter, int* iterations) {
  int it = 0;
  while (hi - lo > tol && it < max_iter) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++it;
  }
  if (iterations) *iterations += it;
  return 0.5 * (lo + hi);
}

}  // namespace conedef::detail
