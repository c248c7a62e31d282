#ifndef SLOWRATE_PROX_HPP
#define SLOWRATE_PROX_HPP

// Proximal mapping of t*f and projection onto the epigraph of f for the
// catalog's even convex functions, computed by monotone root-finding on the
// optimality conditions.

#include <cmath>

#include "slowrate/errors.hpp"
#include "slowrate/funlib.hpp"
#include "slowrate/roots.hpp"

namespace slowrate {

struct ProxConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-14;
  int max_bisections = 200;
  int newton_polish_steps = 3;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ParameterError("ProxConfig: tolerances must be positive");
    if (max_bisections < 60) throw ParameterError("ProxConfig: max_bisections must be >= 60");
    if (newton_polish_steps < 0) throw ParameterError("ProxConfig: newton_polish_steps must be >= 0");
  }
};

/// A point (x, r) of the plane; A is the x-axis, B the epigraph.
struct PlanePoint {
  double x = 0.0;
  double r = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

inline double squared_norm(PlanePoint p) { return p.x * p.x + p.r * p.r; }
inline double squared_distance(PlanePoint a, PlanePoint b) {
  const double dx = a.x - b.x;
  const double dr = a.r - b.r;
  return dx * dx + dr * dr;
}

namespace detail {

// Upper end of the search interval (0, min(x, sup)) with the boundary pulled
// in by a relative 1e-12 so derivatives that blow up there stay finite.
inline double effective_upper(const ScalarConvexFunction& f, double x) {
  if (f.domain_radius.is_plus_infinity()) return x;
  const double sup = f.domain_radius.finite_value();
  return std::fmin(x, sup * (1.0 - 1e-12));
}

}  // namespace detail

/// Unique minimizer of t f(y) + (x - y)^2 / 2.
inline double prox(const ScalarConvexFunction& f, double t, double x, const ProxConfig& cfg = {}) {
  if (!std::isfinite(x)) throw InputError("prox: nonfinite input");
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("prox: t must be a positive finite real");
  if (f.closed_form_prox) return f.closed_form_prox(t, x);
  if (x < 0.0) return -prox(f, t, -x, cfg);
  if (x == 0.0) return 0.0;

  // 0 is the prox exactly when x / t lies in the subdifferential at 0.
  if (f.right_derivative_at_zero.is_plus_infinity()) return 0.0;
  if (x <= t * f.right_derivative_at_zero.finite_value()) return 0.0;

  const auto phi = [&](double y) { return y + t * f.deriv(y) - x; };
  const double hi = detail::effective_upper(f, x);
  if (hi < x) {
    // x beyond the domain: the boundary point is optimal when the
    // stationarity map has not yet reached x there.
    const double at_sup = phi(hi);
    if (at_sup <= 0.0) return f.domain_sup();
  }
  const RootResult res = solve_increasing(phi, 0.0, hi, cfg.max_bisections, cfg.newton_polish_steps);
  return res.root;
}

/// P_A for A = R x {0}.
inline PlanePoint project_A(PlanePoint p) { return {p.x, 0.0}; }

/// R_A = 2 P_A - Id.
inline PlanePoint reflect_A(PlanePoint p) { return {p.x, -p.r}; }

/// Nearest point of epi f to pt; pt.x must lie in the closed domain.
inline PlanePoint project_epigraph(const ScalarConvexFunction& f, PlanePoint pt, const ProxConfig& cfg = {}) {
  if (!std::isfinite(pt.x) || !std::isfinite(pt.r)) throw InputError("project_epigraph: nonfinite point");
  if (!f.in_domain(pt.x)) throw DomainError("project_epigraph: x outside the domain of " + f.label());
  const double fx = f(pt.x);
  if (pt.r >= fx) return pt;
  if (pt.x == 0.0) return {0.0, 0.0};
  if (pt.x < 0.0) {
    const PlanePoint m = project_epigraph(f, {-pt.x, pt.r}, cfg);
    return {-m.x, m.r};
  }

  const double x = pt.x;
  const double r = pt.r;
  // Kink at the origin: the apex is the projection when x / (f(0) - r) is a
  // subgradient at 0.
  if (!f.right_derivative_at_zero.is_plus_infinity() && f.right_derivative_at_zero != ExtendedReal(0.0) &&
      x <= -r * f.right_derivative_at_zero.finite_value()) {
    return {0.0, 0.0};
  }

  // psi < 0 wherever f(y) <= r, and psi is increasing where f(y) > r, so the
  // sign change on (0, x] is unique.
  const auto psi = [&](double y) { return y + (f.eval(y) - r) * f.deriv(y) - x; };
  const double hi = detail::effective_upper(f, x);
  if (hi < x && psi(hi) <= 0.0) return {hi, f.eval(hi)};
  const RootResult res = solve_increasing(psi, 0.0, hi, cfg.max_bisections, cfg.newton_polish_steps);
  return {res.root, f.eval(res.root)};
}

}  // namespace slowrate

#endif  // SLOWRATE_PROX_HPP
