#ifndef SLOWRATE_EXPCLI_EXPERIMENTS_HPP
#define SLOWRATE_EXPCLI_EXPERIMENTS_HPP

// MAP-vs-DRA comparisons on f = |x|^p / p and the summary tables.

#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <vector>

#include <json.hpp>

#include "slowrate/drivers.hpp"
#include "slowrate/errors.hpp"
#include "slowrate/funlib.hpp"
#include "slowrate/ratekit/predict.hpp"

namespace slowrate::expcli {

/// x_n of a trace for n = 0..count-1; iterates past an underflow stop (or an
/// exact-zero fixed point) are 0.
inline std::vector<double> dense_prefix(const PlaneTrace& tr, std::size_t count) {
  if (!tr.dense()) throw PreconditionError("dense_prefix: decimated trace");
  std::vector<double> xs(count, 0.0);
  for (std::size_t i = 0; i < count && i < tr.shadow_xs.size(); ++i) xs[i] = tr.shadow_xs[i];
  return xs;
}

/// x_n^MAP / x_n^DRA for n = 0..count-1; +inf once the DRA iterate is 0.
inline std::vector<double> quotient_sequence(const PlaneTrace& map_tr, const PlaneTrace& dra_tr, std::size_t count) {
  const std::vector<double> a = dense_prefix(map_tr, count);
  const std::vector<double> b = dense_prefix(dra_tr, count);
  std::vector<double> q(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (b[i] == 0.0) {
      q[i] = a[i] == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      q[i] = a[i] / b[i];
    }
  }
  return q;
}

/// count points spread uniformly over [lo, hi].
inline std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
  if (count == 0 || !(lo <= hi)) throw UsageError("grid: need count >= 1 and lo <= hi");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  g.back() = hi;
  return g;
}

struct GridCell {
  double p = 0.0;
  std::vector<double> map_x;  // n = 0..terms-1
  std::vector<double> dra_x;
  std::vector<double> quotient;
};

/// Runs MAP and DRA on |x|^p / p for every p, one task per p; results are
/// returned in grid order.
inline std::vector<GridCell> run_power_grid(const std::vector<double>& ps, double x0, std::size_t terms,
                                            const ProxConfig& cfg = {}) {
  if (terms == 0) throw UsageError("grid: need at least one term");
  std::vector<std::future<GridCell>> jobs;
  jobs.reserve(ps.size());
  for (double p : ps) {
    jobs.push_back(std::async(std::launch::async, [p, x0, terms, cfg] {
      const ScalarConvexFunction f = catalog_get("power_p", {p});
      const PlaneTrace m = run_map(f, x0, terms - 1, cfg);
      const PlaneTrace d = run_dra(f, x0, terms - 1, cfg);
      GridCell c;
      c.p = p;
      c.map_x = dense_prefix(m, terms);
      c.dra_x = dense_prefix(d, terms);
      c.quotient = quotient_sequence(m, d, terms);
      return c;
    }));
  }
  std::vector<GridCell> cells;
  cells.reserve(jobs.size());
  for (auto& j : jobs) cells.push_back(j.get());
  return cells;
}

inline nlohmann::ordered_json prediction_row(const RatePrediction& p) {
  nlohmann::ordered_json j;
  j["category"] = std::string(to_string(p.category));
  if (p.order) j["order"] = *p.order;
  if (p.rate) j["rate"] = *p.rate;
  if (!p.rate_formula.empty()) j["rate"] = p.rate_formula;
  if (p.exponent) j["exponent"] = *p.exponent;
  if (p.constant) j["constant"] = *p.constant;
  if (!p.constant_formula.empty()) j["constant"] = p.constant_formula;
  j["source"] = p.source;
  return j;
}

/// PPA on |x|^q by regime of q, and MAP/DRA on |x|^p / p by regime of p,
/// each evaluated at a representative exponent.
inline nlohmann::ordered_json summary_tables() {
  nlohmann::ordered_json ppa = nlohmann::ordered_json::array();
  const auto add_ppa = [&](const char* regime, const ScalarConvexFunction& f) {
    nlohmann::ordered_json row;
    row["regime"] = regime;
    row["function"] = f.label();
    row["ppa"] = prediction_row(predict(Algorithm::kPpa, f));
    ppa.push_back(row);
  };
  add_ppa("q=1", catalog_get("abs"));
  add_ppa("1<q<2", catalog_get("power_q", {1.5}));
  add_ppa("q=2", catalog_get("power_q", {2.0}));
  add_ppa("q>2", catalog_get("power_q", {3.0}));

  nlohmann::ordered_json map_dra = nlohmann::ordered_json::array();
  const auto add_pair = [&](const char* regime, double p) {
    const ScalarConvexFunction f = catalog_get("power_p", {p});
    nlohmann::ordered_json row;
    row["regime"] = regime;
    row["function"] = f.label();
    row["map"] = prediction_row(predict(Algorithm::kMap, f));
    row["dra"] = prediction_row(predict(Algorithm::kDra, f));
    map_dra.push_back(row);
  };
  add_pair("1<p<2", 1.5);
  add_pair("p=2", 2.0);
  add_pair("p>2", 3.0);

  nlohmann::ordered_json out;
  out["ppa_power_table"] = ppa;
  out["map_dra_power_table"] = map_dra;
  return out;
}

}  // namespace slowrate::expcli

#endif  // SLOWRATE_EXPCLI_EXPERIMENTS_HPP
