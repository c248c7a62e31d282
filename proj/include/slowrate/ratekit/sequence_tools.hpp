#ifndef SLOWRATE_RATEKIT_SEQUENCE_TOOLS_HPP
#define SLOWRATE_RATEKIT_SEQUENCE_TOOLS_HPP

// Tools for decreasing sequences beta_{n+1} = beta_n - delta_n g(beta_n) with
// g(x) = x^q: the H-transform (antiderivative of -1/g), finite-window
// Stolz-Cesaro bounds, the two-sided increment sandwich and the one-sided
// power/geometric envelopes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowrate/errors.hpp"

namespace slowrate {

/// g(x) = x^q together with H (an antiderivative of -1/g) and its inverse:
/// H(x) = x^{1-q}/(q-1) for q > 1 and H(x) = -ln x for q = 1.
template <typename Real = double>
class RecursionModel {
 public:
  explicit RecursionModel(Real q) : q_(q) {
    if (!(q >= Real(1)) || !std::isfinite(static_cast<double>(q))) {
      throw ParameterError("RecursionModel: q must be a finite real >= 1");
    }
  }

  Real q() const { return q_; }

  // Unqualified math calls so extended-precision Real types are found by ADL.
  Real g(Real x) const {
    using std::pow;
    return q_ == Real(1) ? x : Real(pow(x, q_));
  }

  Real H(Real x) const {
    using std::log;
    using std::pow;
    if (q_ == Real(1)) return Real(-log(x));
    return Real(pow(x, Real(1) - q_) / (q_ - Real(1)));
  }

  /// Inverse of H. For q > 1, H maps (0, inf) onto (0, inf) and H_inv(t) for
  /// t <= 0 is reported as +inf (the limit as t -> 0+).
  Real H_inv(Real t) const {
    using std::exp;
    using std::pow;
    if (q_ == Real(1)) return Real(exp(-t));
    if (t <= Real(0)) return std::numeric_limits<Real>::infinity();
    return Real(Real(1) / pow((q_ - Real(1)) * t, Real(1) / (q_ - Real(1))));
  }

  /// H(b) - H(a) for 0 < b <= a without cancellation when b is close to a.
  Real H_increment(Real a, Real b) const {
    using std::expm1;
    using std::log1p;
    using std::pow;
    const Real log_ratio = log1p((b - a) / a);  // ln(b / a) <= 0
    if (q_ == Real(1)) return -log_ratio;
    // b^{1-q} (1 - (b/a)^{q-1}) / (q - 1)
    return Real(pow(b, Real(1) - q_) * -expm1((q_ - Real(1)) * log_ratio) / (q_ - Real(1)));
  }

 private:
  Real q_;
};

inline RecursionModel<double> make_recursion_model(double q) { return RecursionModel<double>(q); }

struct StolzReport {
  double liminf_diff = 0.0;     // liminf (a_{n+1}-a_n)/(b_{n+1}-b_n)
  double ratio_liminf = 0.0;    // liminf a_n / b_n
  double ratio_limsup = 0.0;    // limsup a_n / b_n
  double limsup_diff = 0.0;     // limsup of the difference quotient
  double final_ratio = 0.0;     // a_N / b_N, unanchored
  double max_chain_violation = 0.0;
  bool chain_holds = false;
};

/// Finite-window estimates of the four quantities of the Stolz-Cesaro chain.
///
/// The tail is the last half [m, N] of the window. Difference quotients are
/// taken over the tail. The ratio estimates use the head-free quotient
/// (a_n - a_m)/(b_n - b_m) for n in the last quarter, which tends to the same
/// limits as a_n/b_n when b is unbounded and always lies between the extreme
/// difference quotients on [m, n).
inline StolzReport stolz_bounds(std::span<const double> a, std::span<const double> b, double slack = 1e-9) {
  if (a.size() != b.size()) throw PreconditionError("stolz_bounds: sequences must have equal length");
  if (a.size() < 32) throw PreconditionError("stolz_bounds: at least 32 terms required");
  const bool increasing = b[1] > b[0];
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (increasing ? !(b[i + 1] > b[i]) : !(b[i + 1] < b[i])) {
      throw PreconditionError("stolz_bounds: b must be strictly monotone");
    }
  }
  const std::size_t n = a.size();
  const std::size_t m = n / 2;
  const std::size_t q3 = n - n / 4;
  StolzReport rep;
  rep.liminf_diff = HUGE_VAL;
  rep.limsup_diff = -HUGE_VAL;
  for (std::size_t i = m; i + 1 < n; ++i) {
    const double d = (a[i + 1] - a[i]) / (b[i + 1] - b[i]);
    rep.liminf_diff = std::min(rep.liminf_diff, d);
    rep.limsup_diff = std::max(rep.limsup_diff, d);
  }
  rep.ratio_liminf = HUGE_VAL;
  rep.ratio_limsup = -HUGE_VAL;
  for (std::size_t i = std::max(q3, m + 1); i < n; ++i) {
    const double r = (a[i] - a[m]) / (b[i] - b[m]);
    rep.ratio_liminf = std::min(rep.ratio_liminf, r);
    rep.ratio_limsup = std::max(rep.ratio_limsup, r);
  }
  rep.final_ratio = a[n - 1] / b[n - 1];
  const double scale = std::max({1.0, std::fabs(rep.liminf_diff), std::fabs(rep.limsup_diff)});
  rep.max_chain_violation = std::max({rep.liminf_diff - rep.ratio_liminf, rep.ratio_liminf - rep.ratio_limsup,
                                      rep.ratio_limsup - rep.limsup_diff, 0.0});
  rep.chain_holds = rep.max_chain_violation <= slack * scale;
  return rep;
}

/// Which recursion the sandwich is read from.
enum class SandwichForm {
  kForward,   // beta_{n+1} = beta_n - delta_n g(beta_n)
  kImplicit,  // x_n = x_{n+1} + delta_n g(x_{n+1})
};

struct SandwichReport {
  std::vector<double> deltas;       // recovered delta_n
  double max_violation = 0.0;       // largest relative violation of either side
  std::size_t violations = 0;       // indices beyond the relative slack
  double h_over_n_final = 0.0;      // H(beta_N) / N
  double h_over_n_tail = 0.0;       // (H(beta_N) - H(beta_m)) / (N - m), m = N/2
  double min_tightness = HUGE_VAL;  // min over n of lower/middle (1 = tight)
};

/// Verifies, at every index, the two-sided bound on H(beta_{n+1}) - H(beta_n):
///   forward:  delta_n <= dH <= delta_n g(beta_n)/g(beta_{n+1})
///   implicit: delta_n g(x_{n+1})/g(x_n) <= dH <= delta_n
template <typename Real>
SandwichReport sandwich_check(std::span<const double> beta, const RecursionModel<Real>& model,
                              SandwichForm form = SandwichForm::kForward, double rel_slack = 1e-9) {
  if (beta.size() < 2) throw PreconditionError("sandwich_check: at least two terms required");
  for (std::size_t i = 0; i + 1 < beta.size(); ++i) {
    if (!(beta[i] > 0.0) || !(beta[i + 1] < beta[i]) || !(beta[i + 1] > 0.0)) {
      throw PreconditionError("sandwich_check: sequence must be positive and strictly decreasing");
    }
  }
  SandwichReport rep;
  rep.deltas.reserve(beta.size() - 1);
  for (std::size_t i = 0; i + 1 < beta.size(); ++i) {
    const double cur = beta[i];
    const double next = beta[i + 1];
    const double step = cur - next;
    const double g_cur = static_cast<double>(model.g(cur));
    const double g_next = static_cast<double>(model.g(next));
    const double mid = static_cast<double>(model.H_increment(cur, next));
    double lower = 0.0;
    double upper = 0.0;
    if (form == SandwichForm::kForward) {
      const double delta = step / g_cur;
      rep.deltas.push_back(delta);
      lower = delta;
      upper = step / g_next;
    } else {
      const double delta = step / g_next;
      rep.deltas.push_back(delta);
      lower = step / g_cur;
      upper = delta;
    }
    const double v = std::max((lower - mid) / mid, (mid - upper) / mid);
    rep.max_violation = std::max(rep.max_violation, v);
    if (v > rel_slack) ++rep.violations;
    rep.min_tightness = std::min(rep.min_tightness, lower / mid);
  }
  const std::size_t last = beta.size() - 1;
  const std::size_t m = last / 2;
  rep.h_over_n_final = static_cast<double>(model.H(beta[last])) / static_cast<double>(last);
  if (last > m) {
    rep.h_over_n_tail = static_cast<double>(model.H_increment(beta[m], beta[last])) / static_cast<double>(last - m);
  }
  return rep;
}

enum class EnvelopeSide { kUpper, kLower };

struct EnvelopeReport {
  bool holds = false;
  std::size_t first_index = 0;  // smallest m with the envelope valid on [m, end]
  double rate = 0.0;            // rho - eps (upper) or rho + eps (lower)
  // q = 1: beta_n vs gamma^n with gamma = exp(-rate)
  std::optional<double> gamma;
  // q > 1: beta_n vs 1/((q-1) n rate)^{1/(q-1)} = O(1/n^{1/(q-1)})
  std::optional<double> power_exponent;
};

/// Finds the first index from which
///   upper: beta_n <= H^{-1}(n (rho - eps))
///   lower: beta_n >= H^{-1}(n (rho + eps))
/// holds through the end of the window.
inline EnvelopeReport envelope_check(std::span<const double> beta, double rho, double q, EnvelopeSide side,
                                     double eps) {
  if (side == EnvelopeSide::kUpper && !(eps > 0.0 && eps < rho)) {
    throw ParameterError("envelope_check: upper envelope needs 0 < eps < rho");
  }
  if (side == EnvelopeSide::kLower && !(eps > 0.0 && rho >= 0.0)) {
    throw ParameterError("envelope_check: lower envelope needs eps > 0 and rho >= 0");
  }
  if (beta.empty()) throw PreconditionError("envelope_check: empty sequence");
  const RecursionModel<double> model(q);
  EnvelopeReport rep;
  rep.rate = side == EnvelopeSide::kUpper ? rho - eps : rho + eps;
  if (q == 1.0) {
    rep.gamma = std::exp(-rep.rate);
  } else {
    rep.power_exponent = 1.0 / (q - 1.0);
  }
  std::size_t first_bad_plus_one = 0;
  for (std::size_t n = 0; n < beta.size(); ++n) {
    const double bound = model.H_inv(static_cast<double>(n) * rep.rate);
    const bool ok = side == EnvelopeSide::kUpper ? beta[n] <= bound : beta[n] >= bound;
    if (!ok) first_bad_plus_one = n + 1;
  }
  rep.first_index = first_bad_plus_one;
  rep.holds = first_bad_plus_one < beta.size();
  return rep;
}

struct RhoEstimates {
  double rho_lower = 0.0;  // tail min of delta_n
  double rho_upper = 0.0;  // tail max of delta_n g(beta_n)/g(beta_{n+1})
};

/// Tail estimates of the liminf/limsup rates fed to envelope_check, over the
/// last half of the sequence.
inline RhoEstimates estimate_rho(std::span<const double> beta, double q) {
  if (beta.size() < 4) throw PreconditionError("estimate_rho: at least four terms required");
  const RecursionModel<double> model(q);
  RhoEstimates est{HUGE_VAL, -HUGE_VAL};
  for (std::size_t i = beta.size() / 2; i + 1 < beta.size(); ++i) {
    const double step = beta[i] - beta[i + 1];
    est.rho_lower = std::min(est.rho_lower, step / model.g(beta[i]));
    est.rho_upper = std::max(est.rho_upper, step / model.g(beta[i + 1]));
  }
  return est;
}

}  // namespace slowrate

#endif  // SLOWRATE_RATEKIT_SEQUENCE_TOOLS_HPP
