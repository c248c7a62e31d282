#ifndef SLOWRATE_FUNLIB_HPP
#define SLOWRATE_FUNLIB_HPP

// Catalog of even, nonnegative scalar convex functions with f(0) = 0 and the
// analytic metadata (curvature at the origin, MAP/DRA exponents, PPA regime)
// that the rate predictors consume.

#include <cmath>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slowrate/errors.hpp"
#include "slowrate/extended_real.hpp"

namespace slowrate {

/// Convergence categories shared by predictions and empirical reports.
enum class RateCategory {
  kFinite,
  kOrderQ,
  kSuperlinear,
  kLinear,
  kSublinear,
  kLogarithmic,
  kInconclusive,
  kUnavailable,
};

inline std::string_view to_string(RateCategory c) {
  switch (c) {
    case RateCategory::kFinite: return "finite";
    case RateCategory::kOrderQ: return "order_q";
    case RateCategory::kSuperlinear: return "superlinear";
    case RateCategory::kLinear: return "linear";
    case RateCategory::kSublinear: return "sublinear";
    case RateCategory::kLogarithmic: return "logarithmic";
    case RateCategory::kInconclusive: return "inconclusive";
    case RateCategory::kUnavailable: return "unavailable";
  }
  return "unavailable";
}

/// Closed interval [lo, hi] with possibly infinite ends.
struct Interval {
  ExtendedReal lo;
  ExtendedReal hi;

  bool contains(double x) const { return ExtendedReal(x) >= lo && ExtendedReal(x) <= hi; }
};

/// PPA behaviour for a catalog entry started at x0 > 0.
struct PpaRegime {
  RateCategory category = RateCategory::kUnavailable;
  std::optional<double> order;     // superlinear order
  std::optional<double> rate;      // linear rate
  std::optional<double> exponent;  // x_n ~ constant * (1/n)^exponent
  std::optional<double> constant;
};

struct TheoryMeta {
  // liminf_{x->0+} f(x)/x^2
  ExtendedReal lambda = 0.0;

  // lim f(x) f'(x) / x^q = c_q in (0, inf); empty when no such q exists.
  std::optional<double> map_exponent_q;
  std::optional<double> map_constant_cq;
  // c_q = 0 for every q >= 1 (the extremely flat case).
  bool map_degenerate = false;

  // lim f'(x) / x^q = c in (0, inf).
  std::optional<double> dra_exponent_q;
  std::optional<double> dra_constant_c;
  bool dra_degenerate = false;

  PpaRegime ppa_category;

  // Tight Lipschitz modulus of (df)^{-1} at 0; only known for |x|^2.
  std::optional<double> alpha0;

  // f'(0) = 0 holds, so the MAP/DRA results for the epigraph geometry apply.
  bool smooth_at_zero = false;
};

/// Even convex function on the symmetric domain [-domain_radius, domain_radius].
///
/// `eval` and `deriv` are only called on [0, radius]; the even/odd
/// extensions are applied by the accessors.
struct ScalarConvexFunction {
  std::string name;
  std::vector<double> params;
  ExtendedReal domain_radius = ExtendedReal::plus_infinity();
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  ExtendedReal right_derivative_at_zero = 0.0;
  std::optional<ExtendedReal> second_right_derivative_at_zero;
  std::function<double(double, double)> closed_form_prox;  // (t, x) -> prox_{t f}(x)
  TheoryMeta meta;

  Interval domain() const {
    if (domain_radius.is_plus_infinity()) {
      return {ExtendedReal::minus_infinity(), ExtendedReal::plus_infinity()};
    }
    return {-domain_radius.finite_value(), domain_radius.finite_value()};
  }

  bool in_domain(double x) const {
    return std::isfinite(x) && (domain_radius.is_plus_infinity() || std::fabs(x) <= domain_radius.finite_value());
  }

  /// Extended value: +inf outside the domain.
  ExtendedReal value(double x) const {
    if (!in_domain(x)) return ExtendedReal::plus_infinity();
    return eval(std::fabs(x));
  }

  /// Finite value; the caller guarantees x is in the domain.
  double operator()(double x) const {
    if (!in_domain(x)) throw DomainError(name + ": point outside domain");
    return eval(std::fabs(x));
  }

  double derivative(double x) const {
    if (!in_domain(x)) throw DomainError(name + ": derivative outside domain");
    if (x == 0.0) {
      if (right_derivative_at_zero == ExtendedReal(0.0)) return 0.0;
      throw DomainError(name + ": not differentiable at 0");
    }
    const double d = deriv(std::fabs(x));
    return x > 0 ? d : -d;
  }

  Interval subgradient_at_zero() const {
    if (right_derivative_at_zero.is_plus_infinity()) {
      return {ExtendedReal::minus_infinity(), ExtendedReal::plus_infinity()};
    }
    const double d = right_derivative_at_zero.finite_value();
    return {-d, d};
  }

  /// Largest finite abscissa of the domain, or +inf.
  double domain_sup() const { return domain_radius.to_double(); }

  /// "name" or "name:p1,p2" as accepted by the CLI.
  std::string label() const {
    std::ostringstream os;
    os << name;
    for (std::size_t i = 0; i < params.size(); ++i) {
      os << (i == 0 ? ':' : ',');
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", params[i]);
      os << buf;
    }
    return os.str();
  }
};

namespace detail {

inline void require_params(std::string_view name, std::span<const double> params, std::size_t n) {
  if (params.size() != n) {
    throw ParameterError(std::string(name) + ": expected " + std::to_string(n) + " parameter(s), got " +
                         std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw ParameterError(std::string(name) + ": nonfinite parameter");
  }
}

// exp(x) - x - 1 for x >= 0 without cancellation near 0.
inline double exp_minus_linear(double x) {
  if (x >= 1.0) return std::expm1(x) - x;
  double term = x * x / 2.0;
  double sum = 0.0;
  for (int k = 3; term > 1e-18 * sum || sum == 0.0; ++k) {
    sum += term;
    term *= x / k;
    if (term == 0.0) break;
  }
  return sum;
}

// PPA on |x|^a / s: x_n = x_{n+1} + (a/s) x_{n+1}^{a-1}.
inline PpaRegime power_ppa_regime(double a, double s) {
  const double k = a / s;  // coefficient of x^{a-1} in f'
  PpaRegime r;
  if (a < 2.0) {
    r.category = RateCategory::kSuperlinear;
    r.order = 1.0 / (a - 1.0);
  } else if (a == 2.0) {
    r.category = RateCategory::kLinear;
    r.rate = 1.0 / (1.0 + k);
  } else {
    r.category = RateCategory::kLogarithmic;
    r.exponent = 1.0 / (a - 2.0);
    r.constant = 1.0 / std::pow((a - 2.0) * k, 1.0 / (a - 2.0));
  }
  return r;
}

inline ExtendedReal power_curvature(double a, double at_two) {
  if (a < 2.0) return ExtendedReal::plus_infinity();
  if (a == 2.0) return at_two;
  return 0.0;
}

inline ScalarConvexFunction make_indicator_zero() {
  ScalarConvexFunction f;
  f.name = "indicator_zero";
  f.domain_radius = 0.0;
  f.eval = [](double) { return 0.0; };
  f.deriv = [](double) -> double { throw DomainError("indicator_zero: no derivative"); };
  f.right_derivative_at_zero = ExtendedReal::plus_infinity();
  f.closed_form_prox = [](double, double) { return 0.0; };
  f.meta.lambda = ExtendedReal::plus_infinity();
  f.meta.ppa_category.category = RateCategory::kFinite;
  return f;
}

inline ScalarConvexFunction make_abs() {
  ScalarConvexFunction f;
  f.name = "abs";
  f.eval = [](double x) { return x; };
  f.deriv = [](double) { return 1.0; };
  f.right_derivative_at_zero = 1.0;
  f.closed_form_prox = [](double t, double x) {
    if (std::fabs(x) <= t) return 0.0;
    return x > 0 ? x - t : x + t;
  };
  f.meta.lambda = ExtendedReal::plus_infinity();
  f.meta.ppa_category.category = RateCategory::kFinite;
  return f;
}

inline ScalarConvexFunction make_power_q(double q) {
  if (!(q > 1.0)) throw ParameterError("power_q: exponent must satisfy q > 1");
  ScalarConvexFunction f;
  f.name = "power_q";
  f.params = {q};
  if (q == 2.0) {
    f.eval = [](double x) { return x * x; };
    f.deriv = [](double x) { return 2.0 * x; };
    f.closed_form_prox = [](double t, double x) { return x / (1.0 + 2.0 * t); };
    f.meta.alpha0 = 0.5;
  } else {
    f.eval = [q](double x) { return std::pow(x, q); };
    f.deriv = [q](double x) { return q * std::pow(x, q - 1.0); };
  }
  f.second_right_derivative_at_zero = power_curvature(q, 2.0);
  f.meta.lambda = q < 2.0 ? ExtendedReal::plus_infinity() : (q == 2.0 ? ExtendedReal(1.0) : ExtendedReal(0.0));
  f.meta.map_exponent_q = 2.0 * q - 1.0;
  f.meta.map_constant_cq = q;
  f.meta.dra_exponent_q = q - 1.0;
  f.meta.dra_constant_c = q;
  f.meta.ppa_category = power_ppa_regime(q, 1.0);
  f.meta.smooth_at_zero = true;
  return f;
}

inline ScalarConvexFunction make_power_p_scaled(double p) {
  if (!(p > 1.0)) throw ParameterError("power_p: exponent must satisfy p > 1");
  ScalarConvexFunction f;
  f.name = "power_p";
  f.params = {p};
  if (p == 2.0) {
    f.eval = [](double x) { return 0.5 * x * x; };
    f.deriv = [](double x) { return x; };
  } else {
    f.eval = [p](double x) { return std::pow(x, p) / p; };
    f.deriv = [p](double x) { return std::pow(x, p - 1.0); };
  }
  f.second_right_derivative_at_zero = power_curvature(p, 1.0);
  f.meta.lambda = p < 2.0 ? ExtendedReal::plus_infinity() : (p == 2.0 ? ExtendedReal(0.5) : ExtendedReal(0.0));
  f.meta.map_exponent_q = 2.0 * p - 1.0;
  f.meta.map_constant_cq = 1.0 / p;
  f.meta.dra_exponent_q = p - 1.0;
  f.meta.dra_constant_c = 1.0;
  f.meta.ppa_category = power_ppa_regime(p, p);
  f.meta.smooth_at_zero = true;
  return f;
}

inline ScalarConvexFunction make_circle(double radius) {
  if (!(radius > 0.0)) throw ParameterError("circle: radius must be positive");
  ScalarConvexFunction f;
  f.name = "circle";
  f.params = {radius};
  f.domain_radius = radius;
  const double rr = radius * radius;
  // R - sqrt(R^2 - x^2) rewritten to avoid cancellation near 0.
  f.eval = [radius](double x) { return x * x / (radius + std::sqrt((radius - x) * (radius + x))); };
  f.deriv = [radius](double x) {
    const double s = std::sqrt((radius - x) * (radius + x));
    return s == 0.0 ? HUGE_VAL : x / s;
  };
  f.second_right_derivative_at_zero = 1.0 / radius;
  f.meta.lambda = 0.5 / radius;
  f.meta.map_exponent_q = 3.0;
  f.meta.map_constant_cq = 0.5 / rr;
  f.meta.dra_exponent_q = 1.0;
  f.meta.dra_constant_c = 1.0 / radius;
  f.meta.ppa_category.category = RateCategory::kLinear;
  f.meta.ppa_category.rate = radius / (radius + 1.0);
  f.meta.smooth_at_zero = true;
  return f;
}

inline ScalarConvexFunction make_exp_abs() {
  ScalarConvexFunction f;
  f.name = "exp_abs";
  f.eval = [](double x) { return exp_minus_linear(x); };
  f.deriv = [](double x) { return std::expm1(x); };
  f.second_right_derivative_at_zero = 1.0;
  f.meta.lambda = 0.5;
  f.meta.map_exponent_q = 3.0;
  f.meta.map_constant_cq = 0.5;
  f.meta.dra_exponent_q = 1.0;
  f.meta.dra_constant_c = 1.0;
  f.meta.ppa_category.category = RateCategory::kLinear;
  f.meta.ppa_category.rate = 0.5;
  f.meta.smooth_at_zero = true;
  return f;
}

inline ScalarConvexFunction make_cosh_shifted() {
  ScalarConvexFunction f;
  f.name = "cosh_shifted";
  f.eval = [](double x) {
    const double s = std::sinh(0.5 * x);
    return 2.0 * s * s;
  };
  f.deriv = [](double x) { return std::sinh(x); };
  f.second_right_derivative_at_zero = 1.0;
  f.meta.lambda = 0.5;
  f.meta.map_exponent_q = 3.0;
  f.meta.map_constant_cq = 0.5;
  f.meta.dra_exponent_q = 1.0;
  f.meta.dra_constant_c = 1.0;
  f.meta.ppa_category.category = RateCategory::kLinear;
  f.meta.ppa_category.rate = 0.5;
  f.meta.smooth_at_zero = true;
  return f;
}

inline ScalarConvexFunction make_flat() {
  ScalarConvexFunction f;
  f.name = "flat";
  // exp(-x^-2) is convex exactly on |x| <= sqrt(2/3).
  f.domain_radius = std::sqrt(2.0 / 3.0);
  f.eval = [](double x) { return x == 0.0 ? 0.0 : std::exp(-1.0 / (x * x)); };
  f.deriv = [](double x) {
    if (x == 0.0) return 0.0;
    const double e = std::exp(-1.0 / (x * x));
    return e == 0.0 ? 0.0 : 2.0 * e / (x * x * x);
  };
  f.second_right_derivative_at_zero = 0.0;
  f.meta.lambda = 0.0;
  f.meta.map_degenerate = true;
  f.meta.dra_degenerate = true;
  f.meta.ppa_category.category = RateCategory::kSublinear;
  f.meta.smooth_at_zero = true;
  return f;
}

}  // namespace detail

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"indicator_zero", "abs",     "power_q",      "power_p",
                                                 "circle",         "exp_abs", "cosh_shifted", "flat"};
  return names;
}

/// Looks up a catalog entry. `power_p_scaled` is accepted as an alias of
/// `power_p` (f = |x|^p / p).
inline ScalarConvexFunction catalog_get(std::string_view name, std::span<const double> params = {}) {
  using namespace detail;
  if (name == "indicator_zero") {
    require_params(name, params, 0);
    return make_indicator_zero();
  }
  if (name == "abs") {
    require_params(name, params, 0);
    return make_abs();
  }
  if (name == "power_q") {
    require_params(name, params, 1);
    return make_power_q(params[0]);
  }
  if (name == "power_p" || name == "power_p_scaled") {
    require_params(name, params, 1);
    return make_power_p_scaled(params[0]);
  }
  if (name == "circle") {
    require_params(name, params, 1);
    return make_circle(params[0]);
  }
  if (name == "exp_abs") {
    require_params(name, params, 0);
    return make_exp_abs();
  }
  if (name == "cosh_shifted") {
    require_params(name, params, 0);
    return make_cosh_shifted();
  }
  if (name == "flat") {
    require_params(name, params, 0);
    return make_flat();
  }
  throw ParameterError("unknown catalog function '" + std::string(name) + "'");
}

inline ScalarConvexFunction catalog_get(std::string_view name, std::initializer_list<double> params) {
  return catalog_get(name, std::span<const double>(params.begin(), params.size()));
}

inline const TheoryMeta& theory_meta(const ScalarConvexFunction& f) { return f.meta; }

/// One representative of every catalog family, used by property suites.
inline std::vector<ScalarConvexFunction> standard_catalog() {
  return {
      catalog_get("indicator_zero"),
      catalog_get("abs"),
      catalog_get("power_q", {1.5}),
      catalog_get("power_q", {2.0}),
      catalog_get("power_q", {3.0}),
      catalog_get("power_p", {1.5}),
      catalog_get("power_p", {2.0}),
      catalog_get("power_p", {3.0}),
      catalog_get("circle", {1.0}),
      catalog_get("circle", {2.0}),
      catalog_get("exp_abs"),
      catalog_get("cosh_shifted"),
      catalog_get("flat"),
  };
}

/// g = r f + f^2 / 2, whose prox is the DRA x-update and, for r = 0, the MAP
/// update (the MAP sequence is a PPA sequence for f^2 / 2).
inline ScalarConvexFunction shifted_half_square(const ScalarConvexFunction& f, double r = 0.0) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ParameterError("shifted_half_square: r must be finite and >= 0");
  ScalarConvexFunction g;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", r);
  g.name = r == 0.0 ? "half_square(" + f.label() + ")" : "shifted_half_square(" + f.label() + "," + buf + ")";
  // Parameters are already part of the name.
  g.domain_radius = f.domain_radius;
  g.eval = [fe = f.eval, r](double x) {
    const double v = fe(x);
    return r * v + 0.5 * v * v;
  };
  g.deriv = [fe = f.eval, fd = f.deriv, r](double x) { return (r + fe(x)) * fd(x); };
  if (f.domain_radius == ExtendedReal(0.0)) {
    g.right_derivative_at_zero = ExtendedReal::plus_infinity();
    g.closed_form_prox = [](double, double) { return 0.0; };
  } else if (f.right_derivative_at_zero.is_plus_infinity()) {
    g.right_derivative_at_zero = r > 0.0 ? ExtendedReal::plus_infinity() : ExtendedReal(0.0);
  } else {
    // (r + f(0)) f'_+(0) with f(0) = 0.
    g.right_derivative_at_zero = r * f.right_derivative_at_zero.finite_value();
  }
  return g;
}

}  // namespace slowrate

#endif  // SLOWRATE_FUNLIB_HPP
