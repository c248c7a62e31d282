#ifndef SLOWRATE_ROOTS_HPP
#define SLOWRATE_ROOTS_HPP

#include <bit>
#include <cmath>
#include <cstdint>

#include "slowrate/errors.hpp"

namespace slowrate {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // phi(root)
  int bisections = 0;
  int polish_steps = 0;   // accepted polish steps
};

namespace detail {

// For nonnegative doubles the IEEE bit pattern is order preserving, so
// bisecting the integer image halves the number of representable values in
// the bracket. Any bracket inside [0, DBL_MAX] collapses to adjacent doubles
// in at most 64 steps, independently of its magnitude.
inline double ordered_midpoint(double lo, double hi) {
  const auto a = std::bit_cast<std::uint64_t>(lo);
  const auto b = std::bit_cast<std::uint64_t>(hi);
  return std::bit_cast<double>(a + (b - a) / 2);
}

}  // namespace detail

/// Root of a nondecreasing function phi on [lo, hi] with 0 <= lo < hi,
/// phi(lo) < 0 < phi(hi) (sign change assumed, not re-evaluated).
///
/// Bisection runs until the bracket holds two adjacent doubles (or
/// `max_bisections` is hit); the endpoint with the smaller |phi| is then
/// refined by at most `polish_steps` secant steps that must stay inside the
/// bracket and strictly reduce |phi|.
template <typename Phi>
RootResult solve_increasing(Phi&& phi, double lo, double hi, int max_bisections, int polish_steps) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InternalError("solve_increasing: invalid bracket");
  }
  RootResult out;
  double phi_lo = -1.0;
  double phi_hi = 1.0;
  bool have_lo = false;
  bool have_hi = false;
  while (out.bisections < max_bisections) {
    const double mid = detail::ordered_midpoint(lo, hi);
    if (mid == lo || mid == hi) break;
    const double v = phi(mid);
    ++out.bisections;
    if (v == 0.0) {
      out.root = mid;
      return out;
    }
    if (v < 0.0) {
      lo = mid;
      phi_lo = v;
      have_lo = true;
    } else {
      hi = mid;
      phi_hi = v;
      have_hi = true;
    }
  }
  if (!have_lo) phi_lo = phi(lo);
  if (!have_hi) phi_hi = phi(hi);

  double best = std::fabs(phi_lo) <= std::fabs(phi_hi) ? lo : hi;
  double best_res = best == lo ? phi_lo : phi_hi;
  for (int k = 0; k < polish_steps; ++k) {
    const double slope = (phi_hi - phi_lo) / (hi - lo);
    if (!(slope > 0.0) || !std::isfinite(slope)) break;
    const double cand = best - best_res / slope;
    if (!(cand > lo && cand < hi)) break;
    const double v = phi(cand);
    if (!(std::fabs(v) < std::fabs(best_res))) break;
    best = cand;
    best_res = v;
    ++out.polish_steps;
    if (v < 0.0) {
      lo = cand;
      phi_lo = v;
    } else {
      hi = cand;
      phi_hi = v;
    }
  }
  out.root = best;
  out.residual = best_res;
  return out;
}

}  // namespace slowrate

#endif  // SLOWRATE_ROOTS_HPP
