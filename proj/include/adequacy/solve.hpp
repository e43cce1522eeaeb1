#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "adequacy/error.hpp"

namespace adequacy {

enum class Monotonicity { nonincreasing, nondecreasing };

struct MonotoneRoot {
  double value = 0.0;
  double lower_edge = 0.0;  ///< smallest solution found (within tol)
  double upper_edge = 0.0;  ///< largest solution found (within tol)
  std::size_t iterations = 0;
  bool flat = false;  ///< solution set is an interval wider than tol
};

/**
 * Solve g(v) = target on [lo, hi] for monotone g by bisection.
 *
 * Both edges of the solution set are located separately, so a target that
 * falls on a flat stretch of g yields the midpoint of that stretch. When
 * the target lies outside g's range on the bracket, the nearer bracket end
 * is returned.
 */
template <typename F>
MonotoneRoot solve_monotone(F&& g, double target, double lo, double hi, double tol, Monotonicity dir) {
  if (!(tol > 0.0)) throw InputError("solver tolerance must be positive");
  if (!(lo <= hi)) throw InputError("solver bracket is empty");
  // work with a nonincreasing h(v) = sign * g(v)
  const double sign = dir == Monotonicity::nonincreasing ? 1.0 : -1.0;
  auto h = [&](double v) { return sign * g(v); };
  const double t = sign * target;

  MonotoneRoot out;
  // lower edge: inf { v : h(v) <= t }
  double a = lo;
  if (!(h(lo) <= t)) {
    double l = lo, r = hi;
    while (r - l > tol) {
      const double mid = 0.5 * (l + r);
      ++out.iterations;
      if (h(mid) <= t) r = mid;
      else l = mid;
    }
    a = r == hi && !(h(hi) <= t) ? hi : 0.5 * (l + r);
  }
  // upper edge: sup { v : h(v) >= t }
  double b = hi;
  if (!(h(hi) >= t)) {
    double l = lo, r = hi;
    while (r - l > tol) {
      const double mid = 0.5 * (l + r);
      ++out.iterations;
      if (h(mid) >= t) l = mid;
      else r = mid;
    }
    b = l == lo && !(h(lo) >= t) ? lo : 0.5 * (l + r);
  }
  if (b < a) std::swap(a, b);
  out.lower_edge = a;
  out.upper_edge = b;
  out.value = 0.5 * (a + b);
  out.flat = (b - a) > tol;
  return out;
}

}  // namespace adequacy
