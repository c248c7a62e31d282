#ifndef SLOWRATE_RATEKIT_PREDICT_HPP
#define SLOWRATE_RATEKIT_PREDICT_HPP

// Theoretical convergence type of PPA, MAP and DRA on a catalog function,
// read off the function's metadata. DRA constants depend on the unknown
// limit r_inf of the ordinate; they are carried as closures and evaluated
// when an estimate is supplied.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "slowrate/drivers.hpp"
#include "slowrate/funlib.hpp"

namespace slowrate {

struct RatePrediction {
  Algorithm algorithm = Algorithm::kPpa;
  std::string function;
  RateCategory category = RateCategory::kUnavailable;
  std::optional<double> order;
  std::optional<double> rate;
  std::optional<double> exponent;
  std::optional<double> constant;
  // Symbolic forms in r_inf, set when the value depends on it.
  std::string rate_formula;
  std::string constant_formula;
  std::function<double(double)> rate_in_r_inf;
  std::function<double(double)> constant_in_r_inf;
  std::optional<double> r_inf;
  std::string source;
  std::string note;

  bool available() const { return category != RateCategory::kUnavailable; }
  bool depends_on_r_inf() const { return static_cast<bool>(rate_in_r_inf) || static_cast<bool>(constant_in_r_inf); }

  /// Fills rate/constant from an r_inf estimate.
  void bind_r_inf(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("predict: r_inf must be positive and finite");
    r_inf = r;
    if (rate_in_r_inf) rate = rate_in_r_inf(r);
    if (constant_in_r_inf) constant = constant_in_r_inf(r);
  }
};

namespace detail {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline RatePrediction predict_ppa(const ScalarConvexFunction& f, RatePrediction p) {
  if (f.right_derivative_at_zero > ExtendedReal(0.0)) {
    p.category = RateCategory::kFinite;
    p.source = "ppa-finite-iff-kink";
    return p;
  }
  const PpaRegime& reg = f.meta.ppa_category;
  p.category = reg.category;
  p.order = reg.order;
  p.rate = reg.rate;
  p.exponent = reg.exponent;
  p.constant = reg.constant;
  p.source = "ppa-growth-table";
  if (!p.available()) p.note = "no PPA rate metadata for " + f.label();
  return p;
}

inline RatePrediction predict_map(const ScalarConvexFunction& f, RatePrediction p) {
  const TheoryMeta& m = f.meta;
  if (!m.smooth_at_zero) {
    p.note = "f'(0) != 0: the epigraph meets the axis at a corner";
    return p;
  }
  p.source = "map-sublinear";
  p.category = RateCategory::kSublinear;
  p.rate = 1.0;
  if (m.map_exponent_q && m.map_constant_cq && *m.map_exponent_q > 1.0) {
    const double q = *m.map_exponent_q;
    const double c = *m.map_constant_cq;
    p.category = RateCategory::kLogarithmic;
    p.exponent = 1.0 / (q - 1.0);
    p.constant = 1.0 / std::pow((q - 1.0) * c, 1.0 / (q - 1.0));
    p.source = "map-power-asymptotics";
  } else if (m.map_degenerate) {
    p.note = "f f'/x^q -> 0 for every q: slower than any power of 1/n";
  }
  return p;
}

inline RatePrediction predict_dra(const ScalarConvexFunction& f, RatePrediction p) {
  const TheoryMeta& m = f.meta;
  if (!m.smooth_at_zero) {
    p.note = "f'(0) != 0: the epigraph meets the axis at a corner";
    return p;
  }
  if (!f.second_right_derivative_at_zero) {
    p.note = "second right derivative at 0 unknown for " + f.label();
    return p;
  }
  const ExtendedReal curv = *f.second_right_derivative_at_zero;
  p.source = "dra-curvature-trichotomy";
  if (curv.is_plus_infinity()) {
    p.category = RateCategory::kSuperlinear;
    p.rate = 0.0;
    if (m.dra_exponent_q && m.dra_constant_c && *m.dra_exponent_q < 1.0) {
      // x_n ~ r c x_{n+1}^q, so x_{n+1} / x_n^{1/q} -> (r c)^{-1/q}.
      const double q = *m.dra_exponent_q;
      const double c = *m.dra_constant_c;
      p.order = 1.0 / q;
      p.constant_in_r_inf = [q, c](double r) { return std::pow(r * c, -1.0 / q); };
      p.constant_formula = "(r_inf*" + fmt_num(c) + ")^(-" + fmt_num(1.0 / q) + ")";
    }
    return p;
  }
  const double k = curv.finite_value();
  if (k > 0.0) {
    p.category = RateCategory::kLinear;
    p.rate_in_r_inf = [k](double r) { return 1.0 / (1.0 + r * k); };
    p.rate_formula = "1/(1+r_inf*" + fmt_num(k) + ")";
    return p;
  }
  p.category = RateCategory::kSublinear;
  p.rate = 1.0;
  if (m.dra_exponent_q && m.dra_constant_c && *m.dra_exponent_q > 1.0) {
    const double q = *m.dra_exponent_q;
    const double c = *m.dra_constant_c;
    p.category = RateCategory::kLogarithmic;
    p.exponent = 1.0 / (q - 1.0);
    p.constant_in_r_inf = [q, c](double r) { return 1.0 / std::pow((q - 1.0) * r * c, 1.0 / (q - 1.0)); };
    p.constant_formula = "1/(" + fmt_num(q - 1.0) + "*r_inf*" + fmt_num(c) + ")^" + fmt_num(1.0 / (q - 1.0));
    p.source = "dra-power-asymptotics";
  } else if (m.dra_degenerate) {
    p.note = "f'/x^q -> 0 for every q: slower than any power of 1/n";
  }
  return p;
}

}  // namespace detail

/// Predicted behaviour of `alg` on f started at x0 > 0. DRA rates/constants
/// that need r_inf stay symbolic unless `r_inf` is given.
inline RatePrediction predict(Algorithm alg, const ScalarConvexFunction& f, std::optional<double> r_inf = {}) {
  RatePrediction p;
  p.algorithm = alg;
  p.function = f.label();
  switch (alg) {
    case Algorithm::kPpa: p = detail::predict_ppa(f, std::move(p)); break;
    case Algorithm::kMap: p = detail::predict_map(f, std::move(p)); break;
    case Algorithm::kDra: p = detail::predict_dra(f, std::move(p)); break;
  }
  if (r_inf) {
    p.bind_r_inf(*r_inf);
  }
  return p;
}

}  // namespace slowrate

#endif  // SLOWRATE_RATEKIT_PREDICT_HPP
