// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slowrate/slowrate.hpp"

using namespace slowrate;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed sub-check without stopping the criterion.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // 0 = none
  std::function<void(Outcome&)> body;
};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::vector<double> forward_recursion(double beta0, double delta, double q, std::size_t n) {
  std::vector<double> v{beta0};
  while (v.size() < n) v.push_back(v.back() - delta * std::pow(v.back(), q));
  return v;
}

// ---------------------------------------------------------------------------

void prox_exact(Outcome& o) {
  const auto sq = catalog_get("power_q", {2.0});
  double worst = 0.0;
  for (double x : {1.0, -1.0, 10.0, -10.0, 0.01, -0.01}) worst = std::max(worst, rel(prox(sq, 1.0, x), x / 3.0));
  o.require(worst <= 1e-12, "x/3");

  // Soft threshold sign(x) max(|x| - t, 0) at and around |x| = t.
  const auto abs_f = catalog_get("abs");
  double worst_st = 0.0;
  int points = 0;
  for (int i = 0; i < 25; ++i) {
    const double t = 0.1 + 0.2 * i;
    for (double x : {t, -t, std::nextafter(t, 2 * t), -std::nextafter(t, 2 * t)}) {
      const double expect = std::copysign(std::max(std::fabs(x) - t, 0.0), x);
      worst_st = std::max(worst_st, std::fabs(prox(abs_f, t, x) - expect));
      ++points;
    }
  }
  o.require(points == 100 && worst_st <= 1e-14, "soft threshold");
  o.detail << "max rel err x/3 " << worst << ", soft-threshold max abs err " << worst_st << " on " << points
           << " points";
}

void firm_nonexpansive(Outcome& o) {
  std::mt19937_64 rng(2024);
  double worst_prox = -HUGE_VAL;
  for (const auto& f : standard_catalog()) {
    const double span = f.domain_radius.is_finite() ? std::max(1.0, 1.5 * f.domain_radius.finite_value()) : 5.0;
    std::uniform_real_distribution<double> pick(-span, span);
    for (int i = 0; i < 1000; ++i) {
      const double x = pick(rng);
      const double y = pick(rng);
      const double px = prox(f, 1.0, x);
      const double py = prox(f, 1.0, y);
      const double lhs = (px - py) * (px - py) + ((x - px) - (y - py)) * ((x - px) - (y - py));
      worst_prox = std::max(worst_prox, lhs - (x - y) * (x - y));
    }
  }
  // Projection onto epi f against the fixed anchor (0,0) = P(0,0).
  double worst_epi = -HUGE_VAL;
  for (const auto& f : standard_catalog()) {
    if (f.domain_radius == ExtendedReal(0.0)) continue;
    const double top = f.domain_radius.is_finite() ? f.domain_radius.finite_value() : 3.0;
    std::uniform_real_distribution<double> px(-top, top);
    std::uniform_real_distribution<double> pr(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
      const PlanePoint z{px(rng), pr(rng)};
      const PlanePoint p = project_epigraph(f, z);
      const PlanePoint res{z.x - p.x, z.r - p.r};
      const PlanePoint origin{0.0, 0.0};
      worst_epi = std::max(worst_epi, squared_distance(p, origin) + squared_distance(res, origin) -
                                          squared_distance(z, origin));
    }
  }
  o.require(worst_prox <= 1e-9, "prox");
  o.require(worst_epi <= 1e-9, "epigraph");
  o.detail << "max violation prox " << worst_prox << ", epigraph " << worst_epi;
}

void finite_convergence(Outcome& o) {
  const auto abs_f = catalog_get("abs");
  for (double x0 : {0.5, 1.0, 2.5, 7.3}) {
    const ScalarTrace tr = run_ppa(abs_f, x0, 100);
    const std::size_t k = static_cast<std::size_t>(std::ceil(x0));
    const bool ok = tr.xs.size() == k + 1 && tr.xs[k] == 0.0 && tr.xs[k - 1] > 0.0;
    o.require(ok, "abs x0=" + std::to_string(x0));
  }
  // 3^-n leaves the double range before n = 1000; the run then stops on the
  // underflow floor, never on an exact zero.
  const ScalarTrace sq = run_ppa(catalog_get("power_q", {2.0}), 1.0, 1000);
  const bool never_zero = std::all_of(sq.xs.begin(), sq.xs.end(), [](double x) { return x > 0.0; });
  o.require(never_zero && sq.stop_reason != StopReason::kFixedPoint, "q=2 stays positive");
  o.detail << "abs hits 0 at ceil(x0); q=2 positive for all " << sq.xs.size() << " iterates (stop: "
           << to_string(sq.stop_reason) << ", last x=" << sq.xs.back() << ")";
}

void closed_form_traces(Outcome& o) {
  double worst_circle = 0.0;
  for (auto [radius, x0] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.5}}) {
    const PlaneTrace tr = run_map(catalog_get("circle", {radius}), x0, 100000);
    for (std::size_t n = 0; n < tr.shadow_xs.size(); ++n) {
      const double lhs = tr.shadow_xs[n] * std::sqrt(n * x0 * x0 + radius * radius);
      worst_circle = std::max(worst_circle, std::fabs(lhs - radius * x0));
    }
    o.require(tr.shadow_xs.size() == 100001, "circle trace length");
  }
  // (sqrt(9 + 24x) - 3)/4 in cancellation-free form.
  const PlaneTrace m = run_map(catalog_get("power_p_scaled", {1.5}), 1.0, 10000);
  double x = 1.0;
  double worst_p = 0.0;
  for (std::size_t n = 0; n < m.shadow_xs.size(); ++n) {
    worst_p = std::max(worst_p, std::fabs(m.shadow_xs[n] - x));
    x = 6.0 * x / (std::sqrt(9.0 + 24.0 * x) + 3.0);
  }
  o.require(worst_circle <= 1e-9, "circle");
  o.require(worst_p <= 1e-10 && m.shadow_xs.size() == 10001, "p=3/2");
  o.detail << "circle max err " << worst_circle << ", p=3/2 max err " << worst_p;
}

void map_equals_ppa(Outcome& o) {
  double worst = 0.0;
  int pairs = 0;
  int skipped = 0;
  for (const auto& f : standard_catalog()) {
    for (double x0 : {0.1, 1.0}) {
      if (!f.in_domain(x0)) {
        ++skipped;
        continue;
      }
      const PlaneTrace m = run_map(f, x0, 1000);
      const ScalarTrace p = run_ppa(shifted_half_square(f), x0, 1000);
      if (m.shadow_xs.size() != p.xs.size()) {
        o.require(false, f.label() + " lengths");
        continue;
      }
      for (std::size_t n = 0; n < p.xs.size(); ++n) worst = std::max(worst, std::fabs(m.shadow_xs[n] - p.xs[n]));
      ++pairs;
    }
  }
  o.require(worst <= 1e-10, "agreement");
  o.detail << pairs << " (function, x0) pairs, max diff " << worst << "; " << skipped
           << " starts outside dom f skipped";
}

// Mean |scale(n) x_n - limit| over a window of n.
double window_error(const std::vector<double>& xs, std::size_t lo, std::size_t hi, double e, double limit) {
  double s = 0.0;
  for (std::size_t n = lo; n < hi; ++n) s += std::fabs(std::pow(static_cast<double>(n), e) * xs[n] - limit);
  return s / static_cast<double>(hi - lo);
}

void map_constants(Outcome& o) {
  const PlaneTrace a = run_map(catalog_get("power_p", {1.5}), 1.0, 100000);
  const double va = 1e5 * a.shadow_xs[100000];
  const double ea1 = window_error(a.shadow_xs, 1000, 2000, 1.0, 1.5);
  const double ea2 = window_error(a.shadow_xs, 10000, 20000, 1.0, 1.5);
  const double ea3 = window_error(a.shadow_xs, 50000, 100001, 1.0, 1.5);
  o.require(rel(va, 1.5) <= 0.02, "p=3/2 constant");
  o.require(ea1 > ea2 && ea2 > ea3, "p=3/2 trend");

  const PlaneTrace b = run_map(catalog_get("power_p", {2.0}), 1.0, 1000000);
  const double vb = std::sqrt(1e6) * b.shadow_xs[1000000];
  const double eb1 = window_error(b.shadow_xs, 1000, 2000, 0.5, 1.0);
  const double eb2 = window_error(b.shadow_xs, 10000, 20000, 0.5, 1.0);
  const double eb3 = window_error(b.shadow_xs, 500000, 1000001, 0.5, 1.0);
  o.require(rel(vb, 1.0) <= 0.05, "p=2 constant");
  o.require(eb1 > eb2 && eb2 > eb3, "p=2 trend");
  o.detail << "n x_n = " << va << " (windows " << ea1 << " > " << ea2 << " > " << ea3 << "); sqrt(n) x_n = " << vb
           << " (windows " << eb1 << " > " << eb2 << " > " << eb3 << ")";
}

double last_ratio(const PlaneTrace& tr) {
  const auto& x = tr.shadow_xs;
  return x[x.size() - 1] / x[x.size() - 2];
}

void dra_trichotomy(Outcome& o) {
  const PlaneTrace a = run_dra(catalog_get("power_p", {1.5}), 1.0, 1000);
  const RateReport ra = classify_rate(a);
  const bool super = is_superlinear_family(ra.category) && ra.estimated_order;
  o.require(super && std::fabs(*ra.estimated_order - 2.0) <= 0.1, "(a)");

  const PlaneTrace b = run_dra(catalog_get("power_p", {2.0}), 1.0, 100000);
  const RInfinityEstimate rb = estimate_r_infinity(b);
  const double db = std::fabs(last_ratio(b) - 1.0 / (1.0 + rb.r_hat));
  o.require(db <= 1e-6, "(b)");

  const PlaneTrace c = run_dra(catalog_get("power_p", {3.0}), 1.0, 100000);
  const RInfinityEstimate rc = estimate_r_infinity(c);
  const double vc = 1e5 * c.shadow_xs[100000];
  o.require(rel(vc, 1.0 / rc.r_hat) <= 0.02, "(c)");

  const PlaneTrace d = run_dra(catalog_get("circle", {1.0}), 1.0, 100000);
  const RInfinityEstimate rd = estimate_r_infinity(d);
  const double dd = std::fabs(last_ratio(d) - 1.0 / (1.0 + rd.r_hat));
  o.require(dd <= 1e-6, "(d)");

  o.detail << "(a) " << to_string(ra.category) << " order " << ra.estimated_order.value_or(NAN) << "; (b) r_hat "
           << rb.r_hat << " ratio diff " << db << "; (c) n x_n " << vc << " vs 1/r_hat " << 1.0 / rc.r_hat
           << "; (d) r_hat " << rd.r_hat << " ratio diff " << dd;
}

void map_vs_dra(Outcome& o) {
  std::ostringstream at100;
  for (double p : {1.25, 1.5, 1.75, 2.0, 2.5, 3.0}) {
    const auto f = catalog_get("power_p", {p});
    const PlaneTrace m = run_map(f, 1.0, 100);
    const PlaneTrace d = run_dra(f, 1.0, 100);
    std::vector<double> q(101);
    for (std::size_t n = 0; n <= 100; ++n) {
      // Past a DRA underflow stop the quotient is unbounded.
      q[n] = n < d.shadow_xs.size() ? m.shadow_xs[n] / d.shadow_xs[n] : HUGE_VAL;
    }
    bool nondecreasing = true;
    for (std::size_t n = 51; n <= 100; ++n) nondecreasing = nondecreasing && q[n] >= q[n - 1];
    o.require(q[100] > 1.0 && nondecreasing, "p=" + std::to_string(p));
    at100 << " p=" << p << ":" << q[100];
    if (p == 1.5) {
      o.require(q[30] > 100.0, "p=1.5 at n=30");
    }
  }
  o.detail << "quotient at n=100" << at100.str() << " (inf = DRA below 1e-300)";
}

void guler(Outcome& o) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto f = catalog_get("power_p", {p});
    const GulerReport g = guler_product(run_map(f, 1.0, 10000), f);
    const double target = -1.0 / (p - 1.0);
    o.require(g.final_value < 1e-3 && std::fabs(g.tail_slope - target) <= 0.1 * std::fabs(target),
              "p=" + std::to_string(p));
    o.detail << " p=" << p << ": n f^2 = " << g.final_value << ", slope " << g.tail_slope << " (" << target << ")";
  }
}

void toolkit(Outcome& o) {
  // Stolz chain on several pairs.
  int stolz_ok = 0;
  {
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs(3);
    for (int n = 1; n <= 20000; ++n) {
      pairs[0].first.push_back(0.5 * n * (n + 1.0));
      pairs[0].second.push_back(static_cast<double>(n) * n);
      pairs[1].first.push_back(n % 2 == 0 ? 1.0 : -1.0);
      pairs[1].second.push_back(n);
      pairs[2].first.push_back(std::log(n + 1.0) + std::sin(n));
      pairs[2].second.push_back(std::sqrt(static_cast<double>(n)));
    }
    for (const auto& [a, b] : pairs) stolz_ok += stolz_bounds(a, b).chain_holds ? 1 : 0;
    o.require(stolz_ok == 3, "Stolz chain");
  }

  // H round trip; q = 1 leaves the double range, so it runs in 50 digits.
  double worst_rt = 0.0;
  for (double q : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    using Wide = boost::multiprecision::cpp_bin_float_50;
    const RecursionModel<Wide> wide{Wide(q)};
    const auto m = make_recursion_model(q);
    for (int i = 0; i <= 120; ++i) {
      const double t = std::pow(10.0, -6.0 + i / 10.0);
      if (q > 1.0) worst_rt = std::max(worst_rt, rel(m.H(m.H_inv(t)), t));
      const Wide tw(t);
      worst_rt = std::max(worst_rt, static_cast<double>(abs(wide.H(wide.H_inv(tw)) - tw) / tw));
    }
  }
  o.require(worst_rt <= 1e-12, "H round trip");

  // Sandwich on constant-delta recursions.
  std::size_t violations = 0;
  double worst_limit = 0.0;
  for (auto [q, delta] : {std::pair{2.0, 0.1}, std::pair{2.0, 1.0}, std::pair{3.0, 0.2}, std::pair{1.5, 0.2}}) {
    const SandwichReport s = sandwich_check(forward_recursion(0.5, delta, q, 100001), make_recursion_model(q));
    violations += s.violations;
    worst_limit = std::max(worst_limit, rel(s.h_over_n_final, delta));
  }
  o.require(violations == 0, "sandwich violations");
  o.require(worst_limit <= 0.01, "H/n limit");

  // Envelopes on beta_{n+1} = beta_n - beta_n^2.
  const auto beta = forward_recursion(0.5, 1.0, 2.0, 100001);
  const EnvelopeReport up = envelope_check(beta, 1.0, 2.0, EnvelopeSide::kUpper, 0.1);
  const EnvelopeReport lo = envelope_check(beta, 1.0, 2.0, EnvelopeSide::kLower, 0.1);
  o.require(up.holds && up.first_index <= 100, "upper envelope");
  o.require(lo.holds, "lower envelope");

  o.detail << "Stolz " << stolz_ok << "/3, round trip max rel err " << worst_rt << ", sandwich violations "
           << violations << " (H/n err " << worst_limit << "), envelopes from m=" << up.first_index << " (upper), m="
           << lo.first_index << " (lower)";
}

void classifier(Outcome& o) {
  int correct = 0;
  double worst_exp = 0.0;
  {
    std::vector<double> g{1.0};
    while (g.size() < 300) g.push_back(g.back() / 3.0);
    const RateReport r = classify_rate(g);
    correct += r.category == RateCategory::kLinear ? 1 : 0;
  }
  {
    std::vector<double> d;
    for (int n = 0; std::ldexp(1.0, -(1 << n)) >= kUnderflowFloor; ++n) d.push_back(std::ldexp(1.0, -(1 << n)));
    const RateReport r = classify_rate(d, 0, /*truncated=*/true);
    correct += is_superlinear_family(r.category) && r.estimated_order && std::fabs(*r.estimated_order - 2.0) < 0.1;
  }
  for (double e : {0.5, 1.0, 2.0}) {
    std::vector<double> xs;
    for (int n = 1; n <= 100000; ++n) xs.push_back(std::pow(n, -e));
    const RateReport r = classify_rate(xs, 1);
    correct += r.category == RateCategory::kLogarithmic ? 1 : 0;
    worst_exp = std::max(worst_exp, r.estimated_exponent ? rel(*r.estimated_exponent, e) : HUGE_VAL);
  }
  const RateReport p = classify_rate(run_ppa(catalog_get("power_q", {3.0}), 1.0, 100000));
  const double c = p.estimated_constant.value_or(NAN);
  o.require(correct == 5, "categories");
  o.require(worst_exp <= 0.02, "exponents");
  o.require(p.category == RateCategory::kLogarithmic && rel(c, 1.0 / 3.0) <= 0.05, "PPA q=3 constant");
  o.detail << correct << "/5 categories, max exponent err " << worst_exp << ", PPA q=3 constant " << c;
}

void linear_bound(Outcome& o) {
  const ScalarTrace tr = run_ppa(catalog_get("power_q", {2.0}), 1.0, 1000);
  const LinearBoundReport s = linear_rate_bound_check(tr, 1.0, 0.5, 0.0);
  const LinearBoundReport c = linear_rate_bound_check(tr, 1.0, 0.5, 0.0, LinearBoundVariant::kCorollary);
  const LinearBoundReport bad = linear_rate_bound_check(tr, 10.0, 0.1, 0.0);
  o.require(s.holds && s.first_index == 0, "1/sqrt(7)");
  o.require(c.holds && c.first_index == 0, "1/sqrt(5)");
  o.require(!bad.holds, "false lambda");
  o.detail << "bounds " << s.bound_ratio << ", " << c.bound_ratio << " vs worst ratio " << s.worst_ratio
           << "; lambda=10 bound " << bad.bound_ratio << " rejected";
}

void flat_slowness(Outcome& o) {
  const auto f = catalog_get("flat");
  const PlaneTrace tr = run_map(f, 0.5, 100000);
  const RateReport r = classify_rate(tr);
  const double e = r.estimated_exponent.value_or(HUGE_VAL);
  o.require(e <= 0.2, "exponent");
  bool to_zero = true;
  for (double q : {2.0, 3.0, 5.0}) {
    double prev = HUGE_VAL;
    double first = 0.0;
    for (std::size_t n : {10, 100, 1000, 10000, 25000, 50000, 75000, 100000}) {
      const double x = tr.shadow_xs[n];
      const double v = f(x) * f.derivative(x) / std::pow(x, q);
      if (n == 10) first = v;
      to_zero = to_zero && v < prev;
      prev = v;
    }
    to_zero = to_zero && prev < 1e-3 * first;
  }
  o.require(to_zero, "f f'/x^q decreasing to 0");
  o.detail << to_string(r.category) << ", exponent " << e << ", x_1e5 = " << tr.shadow_xs.back();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "prox exact cases", 1.0, prox_exact},
      {2, "firm nonexpansiveness", 10.0, firm_nonexpansive},
      {3, "finite convergence", 0.0, finite_convergence},
      {4, "closed-form trace oracles", 30.0, closed_form_traces},
      {5, "MAP equals PPA on f^2/2", 0.0, map_equals_ppa},
      {6, "MAP asymptotic constants", 120.0, map_constants},
      {7, "DRA trichotomy", 60.0, dra_trichotomy},
      {8, "MAP vs DRA dominance", 0.0, map_vs_dra},
      {9, "Guler sharpness", 0.0, guler},
      {10, "sequence toolkit", 10.0, toolkit},
      {11, "classifier ground truth", 0.0, classifier},
      {12, "linear rate bound", 0.0, linear_bound},
      {13, "flat extreme slowness", 0.0, flat_slowness},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail << " [over time limit " << c.time_limit_s << " s]";
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
