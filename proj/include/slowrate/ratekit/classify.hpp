#ifndef SLOWRATE_RATEKIT_CLASSIFY_HPP
#define SLOWRATE_RATEKIT_CLASSIFY_HPP

// Empirical convergence-type classification of a positive sequence that
// decreases to 0, from tail statistics of x_{n+1}/x_n and of the ratio of
// successive differences.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowrate/drivers.hpp"
#include "slowrate/errors.hpp"
#include "slowrate/funlib.hpp"

namespace slowrate {

/// Finite-sample thresholds. The categories themselves are limits; these
/// cut-offs decide them on a finite tail.
struct ClassifierThresholds {
  double superlinear_ratio = 0.01;   // last x_{n+1}/x_n below this
  double order_cut = 1.1;            // order estimate above this reports order_q
  double linear_spread = 1e-3;       // max - min of tail ratios
  double linear_min = 0.001;
  double sublinear_cut = 0.98;       // tail ratios above this tend to 1
  double logarithmic_tol = 0.02;     // |d_n - 1| on the tail
  double tail_fraction = 0.25;
  std::size_t tail_cap = 10000;
  std::size_t min_length = 64;       // unless the sequence was cut by underflow
  std::size_t order_points = 6;      // tail points used for the order fit
};

struct RateDiagnostics {
  std::vector<double> ratio_tail;       // samples of x_{n+1}/x_n (at most 16, evenly spaced)
  std::vector<double> diff_ratio_tail;  // samples of (x_{n+1}-x_{n+2})/(x_n-x_{n+1})
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double diff_ratio_max_dev = 0.0;      // max |d_n - 1| on the tail
  std::size_t order_samples = 0;
  bool low_sample_count = false;        // order fitted from fewer than 5 points
};

struct RateReport {
  RateCategory category = RateCategory::kInconclusive;
  std::optional<double> estimated_order;
  std::optional<double> estimated_ratio_c;
  std::optional<double> estimated_exponent;  // x_n ~ constant * (1/n)^exponent
  std::optional<double> estimated_constant;
  std::size_t tail_first = 0;  // iteration numbers spanned by the tail
  std::size_t tail_last = 0;
  RateDiagnostics diagnostics;
};

/// True for categories in which x_{n+1}/x_n -> 0.
inline bool is_superlinear_family(RateCategory c) {
  return c == RateCategory::kSuperlinear || c == RateCategory::kOrderQ;
}

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

inline std::vector<double> sample_evenly(std::span<const double> v, std::size_t k) {
  std::vector<double> out;
  if (v.empty()) return out;
  if (v.size() <= k) return {v.begin(), v.end()};
  for (std::size_t i = 0; i < k; ++i) out.push_back(v[i * (v.size() - 1) / (k - 1)]);
  return out;
}

}  // namespace detail

/// Classifies xs[i] = x_{first_index + i}. `truncated` marks a sequence that
/// stopped because the next iterate underflowed, which waives the minimum
/// length (superlinear sequences only survive a few dozen steps).
inline RateReport classify_rate(std::span<const double> xs, std::size_t first_index = 0, bool truncated = false,
                                const ClassifierThresholds& th = {}) {
  for (double v : xs) {
    if (!std::isfinite(v) || v < 0.0) throw PreconditionError("classify_rate: entries must be finite and >= 0");
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const bool zero_tail = xs[i] == 0.0 && xs[i + 1] == 0.0;
    if (!zero_tail && !(xs[i + 1] < xs[i])) {
      throw PreconditionError("classify_rate: sequence must be strictly decreasing until it reaches 0");
    }
  }
  RateReport rep;
  const auto first_zero = std::find(xs.begin(), xs.end(), 0.0);
  if (first_zero != xs.end()) {
    rep.category = RateCategory::kFinite;
    rep.tail_first = first_index;
    rep.tail_last = first_index + static_cast<std::size_t>(first_zero - xs.begin());
    return rep;
  }
  if (xs.size() < (truncated ? 4 : th.min_length)) {
    throw PreconditionError("classify_rate: sequence too short (" + std::to_string(xs.size()) + " terms)");
  }

  const std::size_t n = xs.size();
  std::size_t tail_len = static_cast<std::size_t>(th.tail_fraction * static_cast<double>(n));
  tail_len = std::min(std::max(tail_len, std::min<std::size_t>(n, 8)), th.tail_cap);
  const std::size_t t0 = n - tail_len;
  rep.tail_first = first_index + t0;
  rep.tail_last = first_index + n - 1;

  std::vector<double> ratios;
  for (std::size_t i = t0; i + 1 < n; ++i) ratios.push_back(xs[i + 1] / xs[i]);
  std::vector<double> dratios;
  for (std::size_t i = t0; i + 2 < n; ++i) dratios.push_back((xs[i + 1] - xs[i + 2]) / (xs[i] - xs[i + 1]));

  auto& diag = rep.diagnostics;
  diag.ratio_min = *std::min_element(ratios.begin(), ratios.end());
  diag.ratio_max = *std::max_element(ratios.begin(), ratios.end());
  diag.ratio_tail = detail::sample_evenly(ratios, 16);
  diag.diff_ratio_tail = detail::sample_evenly(dratios, 16);
  for (double d : dratios) diag.diff_ratio_max_dev = std::max(diag.diff_ratio_max_dev, std::fabs(d - 1.0));

  bool ratios_falling = true;
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i) {
    if (ratios[i + 1] > ratios[i]) ratios_falling = false;
  }

  if (ratios.back() < th.superlinear_ratio && ratios_falling) {
    // log log (1/x_n) grows like n log(order).
    std::vector<double> ns;
    std::vector<double> lls;
    for (std::size_t i = n; i-- > 0 && ns.size() < th.order_points;) {
      if (!(xs[i] < 1.0)) break;
      ns.push_back(static_cast<double>(first_index + i));
      lls.push_back(std::log(-std::log(xs[i])));
    }
    diag.order_samples = ns.size();
    diag.low_sample_count = ns.size() < 5;
    const double order = ns.size() >= 2 ? std::exp(detail::least_squares(ns, lls).slope) : 1.0;
    rep.estimated_order = order;
    rep.category = order > th.order_cut ? RateCategory::kOrderQ : RateCategory::kSuperlinear;
    return rep;
  }

  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());

  if (diag.ratio_max - diag.ratio_min < th.linear_spread && mean >= th.linear_min && mean <= th.sublinear_cut) {
    rep.category = RateCategory::kLinear;
    rep.estimated_ratio_c = mean;
    return rep;
  }

  if (diag.ratio_min > th.sublinear_cut && ratios.back() >= ratios.front()) {
    rep.category = diag.diff_ratio_max_dev < th.logarithmic_tol ? RateCategory::kLogarithmic
                                                                 : RateCategory::kSublinear;
    rep.estimated_ratio_c = 1.0;
    std::vector<double> logn;
    std::vector<double> logx;
    for (std::size_t i = t0; i < n; ++i) {
      const std::size_t idx = first_index + i;
      if (idx == 0) continue;
      logn.push_back(std::log(static_cast<double>(idx)));
      logx.push_back(std::log(xs[i]));
    }
    if (logn.size() >= 2) {
      const double e = -detail::least_squares(logn, logx).slope;
      rep.estimated_exponent = e;
      double acc = 0.0;
      for (std::size_t k = 0; k < logn.size(); ++k) acc += std::exp(logx[k] + e * logn[k]);
      rep.estimated_constant = acc / static_cast<double>(logn.size());
    }
    return rep;
  }

  rep.category = RateCategory::kInconclusive;
  return rep;
}

/// Classifies the dense tail of a trace; an underflow stop waives the
/// minimum length.
inline RateReport classify_rate(const ScalarTrace& tr, const ClassifierThresholds& th = {}) {
  std::size_t start = tr.xs.size() - 1;
  while (start > 0 && tr.index(start - 1) + 1 == tr.index(start)) --start;
  std::span<const double> xs(tr.xs);
  return classify_rate(xs.subspan(start), tr.index(start), tr.stop_reason == StopReason::kUnderflow, th);
}

inline RateReport classify_rate(const PlaneTrace& tr, const ClassifierThresholds& th = {}) {
  std::size_t start = tr.shadow_xs.size() - 1;
  while (start > 0 && tr.index(start - 1) + 1 == tr.index(start)) --start;
  std::span<const double> xs(tr.shadow_xs);
  return classify_rate(xs.subspan(start), tr.index(start), tr.stop_reason == StopReason::kUnderflow, th);
}

}  // namespace slowrate

#endif  // SLOWRATE_RATEKIT_CLASSIFY_HPP
