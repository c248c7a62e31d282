#ifndef SLOWRATE_RATEKIT_CHECKS_HPP
#define SLOWRATE_RATEKIT_CHECKS_HPP

// Trace-level checks: the DRA ordinate limit, the n f(x_n)^2 product along
// MAP, the PPA superlinear majorant and the PPA linear ratio bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "slowrate/drivers.hpp"
#include "slowrate/errors.hpp"
#include "slowrate/funlib.hpp"
#include "slowrate/ratekit/classify.hpp"

namespace slowrate {

struct RInfinityEstimate {
  double r_hat = 0.0;
  double uncertainty = 0.0;  // r_N - r_{N-k}, k = N/10; a trailing increment, not a bound
};

/// Estimates lim r_n from a DRA trace. Fewer than 1000 steps are accepted
/// only when the run stopped early (underflow or a fixed point).
inline RInfinityEstimate estimate_r_infinity(const PlaneTrace& tr) {
  if (tr.algorithm != Algorithm::kDra) throw PreconditionError("estimate_r_infinity: DRA trace required");
  if (tr.zs.size() < 2) throw PreconditionError("estimate_r_infinity: trace has no steps");
  const std::size_t steps = tr.steps();
  if (steps < 1000 && tr.stop_reason == StopReason::kBudget) {
    throw PreconditionError("estimate_r_infinity: at least 1000 steps required");
  }
  for (std::size_t i = 0; i + 1 < tr.zs.size(); ++i) {
    // r_{n+1} = r_n + f(x_{n+1}) can stall once f(x) drops below r's ulp.
    if (tr.zs[i + 1].r < tr.zs[i].r) {
      throw TraceIntegrityError("estimate_r_infinity: r decreases at step " + std::to_string(tr.index(i + 1)));
    }
  }
  RInfinityEstimate est;
  est.r_hat = tr.zs.back().r;
  const std::size_t target = steps - steps / 10;
  std::size_t j = tr.zs.size() - 1;
  while (j > 0 && tr.index(j) > target) --j;
  est.uncertainty = est.r_hat - tr.zs[j].r;
  return est;
}

struct GulerReport {
  std::vector<std::size_t> n;
  std::vector<double> products;  // n f(x_n)^2 for n >= 1
  bool tends_to_zero = false;
  double final_value = 0.0;
  double tail_slope = 0.0;  // slope of log(n f^2(x_n)) against log n over the last quarter
};

namespace detail {

inline GulerReport guler_from(std::span<const double> xs, const std::vector<std::size_t>& idx,
                              const ScalarConvexFunction& f, double threshold) {
  GulerReport rep;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t n = idx.empty() ? i : idx[i];
    if (n == 0) continue;
    const double fx = f(xs[i]);
    rep.n.push_back(n);
    rep.products.push_back(static_cast<double>(n) * fx * fx);
  }
  if (rep.products.size() < 8) throw PreconditionError("guler_product: trace too short");
  const std::size_t t0 = rep.products.size() - rep.products.size() / 4;
  bool decreasing = true;
  std::vector<double> ln;
  std::vector<double> lp;
  for (std::size_t i = t0; i < rep.products.size(); ++i) {
    if (i > t0 && rep.products[i] > rep.products[i - 1]) decreasing = false;
    if (rep.products[i] > 0.0) {
      ln.push_back(std::log(static_cast<double>(rep.n[i])));
      lp.push_back(std::log(rep.products[i]));
    }
  }
  rep.final_value = rep.products.back();
  rep.tends_to_zero = decreasing && rep.final_value < threshold;
  if (ln.size() >= 2) rep.tail_slope = least_squares(ln, lp).slope;
  return rep;
}

}  // namespace detail

/// n f(x_n)^2 along a MAP trace, which tends to 0 (f(x_n) = o(1/n) at the
/// minimum value 0).
inline GulerReport guler_product(const PlaneTrace& tr, const ScalarConvexFunction& f, double threshold = 1e-3) {
  if (tr.algorithm != Algorithm::kMap) throw PreconditionError("guler_product: MAP trace required");
  return detail::guler_from(tr.shadow_xs, tr.indices, f, threshold);
}

/// Same check on the equivalent PPA trace for f^2/2.
inline GulerReport guler_product(const ScalarTrace& tr, const ScalarConvexFunction& f, double threshold = 1e-3) {
  if (tr.algorithm != Algorithm::kPpa || tr.function != shifted_half_square(f).label()) {
    throw PreconditionError("guler_product: scalar trace must be PPA on f^2/2");
  }
  return detail::guler_from(tr.xs, tr.indices, f, threshold);
}

/// Closed-form majorant rho_n of the PPA iterates for |x|^q, 1 < q < 2,
/// started at x0 = rho0:
///   rho_n = rho0^{s^n} (1/q)^{(s^n - 1)/(2 - q)},  s = 1/(q - 1).
inline double ppa_superlinear_majorant(double q, double rho0, std::size_t n) {
  if (!(q > 1.0 && q < 2.0)) throw ParameterError("ppa_superlinear_majorant: q must lie in (1, 2)");
  if (!(rho0 > 0.0 && rho0 <= 0.5)) throw ParameterError("ppa_superlinear_majorant: rho0 must lie in (0, 0.5]");
  const double sn = std::pow(1.0 / (q - 1.0), static_cast<double>(n));
  return std::exp(sn * std::log(rho0) - (sn - 1.0) / (2.0 - q) * std::log(q));
}

enum class LinearBoundVariant {
  kSharp,      // alpha0 / sqrt(1 + alpha0^2 (1 + 2 lambda - 2 eps))
  kCorollary,  // alpha0 / sqrt(1 + alpha0^2)
};

struct LinearBoundReport {
  bool holds = false;
  std::size_t first_index = 0;  // smallest m with |x_{n+1}| <= bound |x_n| for all n >= m
  double bound_ratio = 0.0;
  double worst_ratio = 0.0;     // max |x_{n+1}/x_n| from first_index on
};

/// Checks the linear PPA ratio bound for functions with f(x) >= lambda x^2
/// near 0 and Lipschitz modulus alpha0 of the inverse subdifferential.
inline LinearBoundReport linear_rate_bound_check(const ScalarTrace& tr, double lambda, double alpha0, double eps,
                                                 LinearBoundVariant variant = LinearBoundVariant::kSharp) {
  if (tr.algorithm != Algorithm::kPpa) throw PreconditionError("linear_rate_bound_check: PPA trace required");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("linear_rate_bound_check: lambda must be in (0, inf)");
  if (!(alpha0 >= 0.5 / lambda && alpha0 <= 1.0 / lambda)) {
    throw ParameterError("linear_rate_bound_check: alpha0 must lie in [1/(2 lambda), 1/lambda]");
  }
  if (!(eps >= 0.0) || !(1.0 + 2.0 * lambda - 2.0 * eps > 0.0)) {
    throw ParameterError("linear_rate_bound_check: eps must be >= 0 and below lambda + 1/2");
  }
  LinearBoundReport rep;
  const double a2 = alpha0 * alpha0;
  rep.bound_ratio = variant == LinearBoundVariant::kSharp ? alpha0 / std::sqrt(1.0 + a2 * (1.0 + 2.0 * lambda - 2.0 * eps))
                                                          : alpha0 / std::sqrt(1.0 + a2);
  std::size_t first_ok = 0;
  for (std::size_t i = 0; i + 1 < tr.xs.size(); ++i) {
    if (tr.index(i + 1) != tr.index(i) + 1) continue;
    if (std::fabs(tr.xs[i + 1]) > rep.bound_ratio * std::fabs(tr.xs[i])) first_ok = tr.index(i) + 1;
  }
  const std::size_t last = tr.xs.empty() ? 0 : tr.index(tr.xs.size() - 1);
  rep.first_index = first_ok;
  rep.holds = first_ok < last;
  for (std::size_t i = 0; i + 1 < tr.xs.size(); ++i) {
    if (tr.index(i) < first_ok || tr.index(i + 1) != tr.index(i) + 1 || tr.xs[i] == 0.0) continue;
    rep.worst_ratio = std::max(rep.worst_ratio, std::fabs(tr.xs[i + 1] / tr.xs[i]));
  }
  return rep;
}

}  // namespace slowrate

#endif  // SLOWRATE_RATEKIT_CHECKS_HPP
