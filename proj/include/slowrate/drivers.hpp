#ifndef SLOWRATE_DRIVERS_HPP
#define SLOWRATE_DRIVERS_HPP

// PPA, MAP and DRA on A = R x {0}, B = epi f, recorded as iterate traces,
// plus the per-step Fejer checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "slowrate/errors.hpp"
#include "slowrate/funlib.hpp"
#include "slowrate/prox.hpp"

namespace slowrate {

enum class Algorithm { kPpa, kMap, kDra };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kPpa: return "ppa";
    case Algorithm::kMap: return "map";
    case Algorithm::kDra: return "dra";
  }
  return "ppa";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "ppa") return Algorithm::kPpa;
  if (s == "map") return Algorithm::kMap;
  if (s == "dra") return Algorithm::kDra;
  throw UsageError("unknown algorithm '" + std::string(s) + "' (expected ppa, map or dra)");
}

enum class StopReason { kBudget, kUnderflow, kFixedPoint };

inline std::string_view to_string(StopReason s) {
  switch (s) {
    case StopReason::kBudget: return "budget";
    case StopReason::kUnderflow: return "underflow";
    case StopReason::kFixedPoint: return "fixed_point";
  }
  return "budget";
}

/// Iterates below this magnitude are not recorded; the run stops instead.
inline constexpr double kUnderflowFloor = 1e-300;

struct TraceOptions {
  // Keep every stride-th iterate plus the last tail_window iterates.
  std::size_t stride = 1;
  std::size_t tail_window = 10000;
};

struct ScalarTrace {
  Algorithm algorithm = Algorithm::kPpa;
  std::string function;  // catalog label
  double x0 = 0.0;
  std::vector<double> xs;
  std::vector<std::size_t> indices;  // iteration numbers; empty means xs[i] is x_i
  StopReason stop_reason = StopReason::kBudget;

  std::size_t index(std::size_t i) const { return indices.empty() ? i : indices[i]; }
  bool dense() const { return indices.empty(); }
};

struct PlaneTrace {
  Algorithm algorithm = Algorithm::kMap;
  std::string function;
  PlanePoint z0;
  std::vector<PlanePoint> zs;
  std::vector<double> shadow_xs;  // x-components of zs
  std::vector<std::size_t> indices;
  StopReason stop_reason = StopReason::kBudget;

  std::size_t index(std::size_t i) const { return indices.empty() ? i : indices[i]; }
  bool dense() const { return indices.empty(); }
  std::size_t steps() const { return zs.empty() ? 0 : index(zs.size() - 1); }
};

namespace detail {

// Collects iterates under stride decimation with a dense tail.
template <typename T>
class TraceRecorder {
 public:
  explicit TraceRecorder(const TraceOptions& opts) : opts_(opts) {
    if (opts_.stride == 0) throw ParameterError("TraceOptions: stride must be >= 1");
  }

  void push(std::size_t n, const T& v) {
    if (opts_.stride == 1) {
      head_.push_back(v);
      return;
    }
    if (n % opts_.stride == 0) {
      head_idx_.push_back(n);
      head_.push_back(v);
    }
    tail_idx_.push_back(n);
    tail_.push_back(v);
    if (tail_.size() > opts_.tail_window) {
      tail_.pop_front();
      tail_idx_.pop_front();
    }
  }

  void finish(std::vector<T>& values, std::vector<std::size_t>& indices) {
    if (opts_.stride == 1) {
      values = std::move(head_);
      indices.clear();
      return;
    }
    values.clear();
    indices.clear();
    const std::size_t tail_start = tail_idx_.empty() ? 0 : tail_idx_.front();
    for (std::size_t i = 0; i < head_.size() && (tail_idx_.empty() || head_idx_[i] < tail_start); ++i) {
      values.push_back(head_[i]);
      indices.push_back(head_idx_[i]);
    }
    values.insert(values.end(), tail_.begin(), tail_.end());
    indices.insert(indices.end(), tail_idx_.begin(), tail_idx_.end());
  }

 private:
  TraceOptions opts_;
  std::vector<T> head_;
  std::vector<std::size_t> head_idx_;
  std::deque<T> tail_;
  std::deque<std::size_t> tail_idx_;
};

// With f'_+(0) = 0 no iterate started off 0 is ever exactly 0, so a computed
// 0 is an underflow of the true (positive) iterate.
inline bool zero_is_unreachable(const ScalarConvexFunction& f) {
  return f.right_derivative_at_zero == ExtendedReal(0.0);
}

inline void require_start(double x0, std::string_view who) {
  if (!std::isfinite(x0) || !(x0 > 0.0)) {
    throw InputError(std::string(who) + ": x0 must be a positive finite real");
  }
}

}  // namespace detail

/// x_{n+1} = prox_f(x_n). Since the prox is defined on all of R, x0 may lie
/// outside dom f (the first step maps it into the domain).
inline ScalarTrace run_ppa(const ScalarConvexFunction& f, double x0, std::size_t max_iter,
                           const ProxConfig& cfg = {}, const TraceOptions& opts = {}) {
  detail::require_start(x0, "run_ppa");
  cfg.validate();
  ScalarTrace tr;
  tr.algorithm = Algorithm::kPpa;
  tr.function = f.label();
  tr.x0 = x0;
  detail::TraceRecorder<double> rec(opts);
  rec.push(0, x0);
  double x = x0;
  tr.stop_reason = StopReason::kBudget;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    const double next = prox(f, 1.0, x, cfg);
    if (std::fabs(next) < kUnderflowFloor && (next != 0.0 || detail::zero_is_unreachable(f))) {
      tr.stop_reason = StopReason::kUnderflow;
      break;
    }
    rec.push(n, next);
    if (next == 0.0 || next == x) {
      tr.stop_reason = StopReason::kFixedPoint;
      break;
    }
    x = next;
  }
  rec.finish(tr.xs, tr.indices);
  return tr;
}

/// One MAP step a -> P_A P_B a.
inline PlanePoint map_step(const ScalarConvexFunction& f, PlanePoint a, const ProxConfig& cfg = {}) {
  return project_A(project_epigraph(f, a, cfg));
}

/// One DRA step z -> (Id - P_A + P_B R_A) z.
inline PlanePoint dra_step(const ScalarConvexFunction& f, PlanePoint z, const ProxConfig& cfg = {}) {
  const PlanePoint pa = project_A(z);
  const PlanePoint pb = project_epigraph(f, reflect_A(z), cfg);
  return {z.x - pa.x + pb.x, z.r - pa.r + pb.r};
}

/// The same DRA step in reduced form: x+ = prox of r f + f^2/2 at x and
/// r+ = r + f(x+).
inline PlanePoint dra_step_reduced(const ScalarConvexFunction& f, PlanePoint z, const ProxConfig& cfg = {}) {
  const double xp = prox(shifted_half_square(f, z.r), 1.0, z.x, cfg);
  return {xp, z.r + f(xp)};
}

namespace detail {

template <typename Step>
PlaneTrace run_plane(Algorithm alg, const ScalarConvexFunction& f, PlanePoint z0, std::size_t max_iter,
                     const TraceOptions& opts, Step&& step) {
  PlaneTrace tr;
  tr.algorithm = alg;
  tr.function = f.label();
  tr.z0 = z0;
  TraceRecorder<PlanePoint> rec(opts);
  rec.push(0, z0);
  PlanePoint z = z0;
  tr.stop_reason = StopReason::kBudget;
  for (std::size_t n = 1; n <= max_iter; ++n) {
    const PlanePoint next = step(z);
    if (std::fabs(next.x) < kUnderflowFloor && (next.x != 0.0 || zero_is_unreachable(f))) {
      tr.stop_reason = StopReason::kUnderflow;
      break;
    }
    rec.push(n, next);
    if (next == z || next.x == 0.0) {
      tr.stop_reason = StopReason::kFixedPoint;
      break;
    }
    z = next;
  }
  rec.finish(tr.zs, tr.indices);
  tr.shadow_xs.reserve(tr.zs.size());
  for (const PlanePoint& p : tr.zs) tr.shadow_xs.push_back(p.x);
  return tr;
}

}  // namespace detail

/// a_{n+1} = P_A P_B a_n from a_0 = (x0, 0).
inline PlaneTrace run_map(const ScalarConvexFunction& f, double x0, std::size_t max_iter, const ProxConfig& cfg = {},
                          const TraceOptions& opts = {}) {
  detail::require_start(x0, "run_map");
  if (!f.in_domain(x0)) throw InputError("run_map: x0 outside the domain of " + f.label());
  cfg.validate();
  return detail::run_plane(Algorithm::kMap, f, {x0, 0.0}, max_iter, opts,
                           [&](PlanePoint a) { return map_step(f, a, cfg); });
}

/// DRA from an arbitrary z0 with z0.x in dom f; the geometric step is used.
inline PlaneTrace run_dra_from(const ScalarConvexFunction& f, PlanePoint z0, std::size_t max_iter,
                               const ProxConfig& cfg = {}, const TraceOptions& opts = {}) {
  if (!std::isfinite(z0.x) || !std::isfinite(z0.r)) throw InputError("run_dra: nonfinite start");
  if (!f.in_domain(z0.x)) throw InputError("run_dra: x0 outside the domain of " + f.label());
  cfg.validate();
  return detail::run_plane(Algorithm::kDra, f, z0, max_iter, opts,
                           [&](PlanePoint z) { return dra_step(f, z, cfg); });
}

/// z_{n+1} = T z_n with T = Id - P_A + P_B R_A and z_0 = (x0, 0).
inline PlaneTrace run_dra(const ScalarConvexFunction& f, double x0, std::size_t max_iter,
                          const ProxConfig& cfg = {}, const TraceOptions& opts = {}) {
  detail::require_start(x0, "run_dra");
  return run_dra_from(f, {x0, 0.0}, max_iter, cfg, opts);
}

/// DRA driven by the reduced recursion; used to cross-check run_dra.
inline PlaneTrace run_dra_reduced(const ScalarConvexFunction& f, double x0, std::size_t max_iter,
                                  const ProxConfig& cfg = {}, const TraceOptions& opts = {}) {
  detail::require_start(x0, "run_dra_reduced");
  if (!f.in_domain(x0)) throw InputError("run_dra_reduced: x0 outside the domain of " + f.label());
  cfg.validate();
  return detail::run_plane(Algorithm::kDra, f, {x0, 0.0}, max_iter, opts,
                           [&](PlanePoint z) { return dra_step_reduced(f, z, cfg); });
}

struct FejerReport {
  // max over steps of (lhs - rhs) of the Fejer inequality, floored at 0
  double max_violation = 0.0;
  // MAP only: max over steps of x_{n+1}(x_{n+1} - x_n) + f(x_{n+1})^2
  double max_map_inequality = -HUGE_VAL;
  std::size_t steps_checked = 0;
};

/// PPA toward the minimizer z = 0:
/// |x_{n+1}|^2 + |x_n - x_{n+1}|^2 <= |x_n|^2.
inline FejerReport check_fejer(const ScalarTrace& tr) {
  if (tr.algorithm != Algorithm::kPpa) throw PreconditionError("check_fejer: scalar traces must come from run_ppa");
  FejerReport rep;
  for (std::size_t i = 0; i + 1 < tr.xs.size(); ++i) {
    if (tr.index(i + 1) != tr.index(i) + 1) continue;
    const double a = tr.xs[i];
    const double b = tr.xs[i + 1];
    const double lhs = b * b + (a - b) * (a - b);
    const double rhs = a * a;
    rep.max_violation = std::max(rep.max_violation, lhs - rhs);
    ++rep.steps_checked;
  }
  return rep;
}

/// MAP toward c = (0, 0):
/// |a_{n+1}|^2 + |a_{n+1} - P_B a_n|^2 + |P_B a_n - a_n|^2 <= |a_n|^2,
/// where P_B a_n = (x_{n+1}, f(x_{n+1})).
inline FejerReport check_fejer(const PlaneTrace& tr, const ScalarConvexFunction& f) {
  if (tr.algorithm == Algorithm::kDra) {
    throw PreconditionError("check_fejer: no Fejer inequality toward A and B is checked for DRA traces");
  }
  if (tr.algorithm != Algorithm::kMap) throw PreconditionError("check_fejer: plane trace must come from run_map");
  FejerReport rep;
  for (std::size_t i = 0; i + 1 < tr.zs.size(); ++i) {
    if (tr.index(i + 1) != tr.index(i) + 1) continue;
    const PlanePoint a = tr.zs[i];
    const PlanePoint next = tr.zs[i + 1];
    const PlanePoint pb{next.x, f(next.x)};
    const double lhs = squared_norm(next) + squared_distance(next, pb) + squared_distance(pb, a);
    rep.max_violation = std::max(rep.max_violation, lhs - squared_norm(a));
    const double fy = pb.r;
    rep.max_map_inequality = std::max(rep.max_map_inequality, next.x * (next.x - a.x) + fy * fy);
    ++rep.steps_checked;
  }
  return rep;
}

}  // namespace slowrate

#endif  // SLOWRATE_DRIVERS_HPP
