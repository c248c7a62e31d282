#ifndef SLOWRATE_EXPCLI_CLI_HPP
#define SLOWRATE_EXPCLI_CLI_HPP

// The slowrate command line:
//   slowrate <run|classify|predict|compare|figure1|figure2|table> [options]
// Exit codes: 0 success, 1 numeric or I/O failure, 2 usage error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "slowrate/drivers.hpp"
#include "slowrate/errors.hpp"
#include "slowrate/expcli/experiments.hpp"
#include "slowrate/expcli/function_spec.hpp"
#include "slowrate/expcli/io.hpp"
#include "slowrate/ratekit.hpp"

namespace slowrate::expcli {

namespace fs = std::filesystem;

struct ExperimentConfig {
  std::string algorithm = "map";
  std::string function = "power_p:2";
  double x0 = 1.0;
  std::size_t iters = 1000;
  std::size_t stride = 1;
  std::string out = ".";
  ProxConfig prox;

  void validate() const {
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw UsageError("--x0 must be a positive finite number");
    if (iters < 1) throw UsageError("--iters must be >= 1");
    if (stride < 1) throw UsageError("--stride must be >= 1");
    try {
      prox.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }

  ordered_json to_json() const {
    return {{"algorithm", algorithm},
            {"function", function},
            {"x0", x0},
            {"iters", iters},
            {"stride", stride},
            {"abs_tol", prox.abs_tol},
            {"rel_tol", prox.rel_tol},
            {"max_bisections", prox.max_bisections}};
  }
};

namespace detail {

inline void add_run_options(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--function", c.function, "catalog function, name[:params]");
  sub->add_option("--x0", c.x0, "starting point (> 0)");
  sub->add_option("--iters", c.iters, "iteration budget");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--abs-tol", c.prox.abs_tol, "root-finder absolute verification tolerance");
  sub->add_option("--rel-tol", c.prox.rel_tol, "root-finder relative verification tolerance");
  sub->add_option("--max-bisections", c.prox.max_bisections, "bisection cap per prox/projection");
}

inline void emit(std::ostream& out, const fs::path& p) { out << "wrote " << p.string() << '\n'; }

inline int cmd_run(const ExperimentConfig& c, std::ostream& out) {
  c.validate();
  const Algorithm alg = parse_algorithm(c.algorithm);
  const ScalarConvexFunction f = make_function(c.function);
  TraceOptions opts;
  opts.stride = c.stride;
  const fs::path dir(c.out);
  ordered_json manifest;
  manifest["command"] = "run";
  manifest["config"] = c.to_json();
  manifest["function_label"] = f.label();
  std::ofstream csv = open_out(dir / "trace.csv");
  if (alg == Algorithm::kPpa) {
    const ScalarTrace tr = run_ppa(f, c.x0, c.iters, c.prox, opts);
    write_trace_csv(csv, tr);
    manifest["stop_reason"] = std::string(to_string(tr.stop_reason));
    manifest["rows"] = tr.xs.size();
  } else {
    const PlaneTrace tr =
        alg == Algorithm::kMap ? run_map(f, c.x0, c.iters, c.prox, opts) : run_dra(f, c.x0, c.iters, c.prox, opts);
    write_trace_csv(csv, tr);
    manifest["stop_reason"] = std::string(to_string(tr.stop_reason));
    manifest["rows"] = tr.zs.size();
  }
  csv.close();
  emit(out, dir / "trace.csv");
  write_json(dir / "manifest.json", manifest);
  emit(out, dir / "manifest.json");
  return 0;
}

inline int cmd_classify(const std::string& trace_path, bool truncated, const std::string& out_dir, std::ostream& out) {
  const TraceTable t = read_trace_csv(fs::path(trace_path));
  ScalarTrace tr;
  tr.xs = t.x;
  tr.indices = t.n;
  tr.stop_reason = truncated ? StopReason::kUnderflow : StopReason::kBudget;
  const ordered_json j = to_json(classify_rate(tr));
  const fs::path p = fs::path(out_dir) / "rate_report.json";
  write_json(p, j);
  out << j.dump(2) << '\n';
  return 0;
}

inline int cmd_predict(const ExperimentConfig& c, std::optional<double> r_inf, std::ostream& out) {
  c.validate();
  const Algorithm alg = parse_algorithm(c.algorithm);
  const ScalarConvexFunction f = make_function(c.function);
  RatePrediction pred = predict(alg, f);
  ordered_json calib = nullptr;
  if (pred.depends_on_r_inf()) {
    if (!r_inf) {
      // Calibration run: r_n increases to r_inf.
      const PlaneTrace tr = run_dra(f, c.x0, std::max<std::size_t>(c.iters, 1000), c.prox);
      const RInfinityEstimate est = estimate_r_infinity(tr);
      r_inf = est.r_hat;
      calib = {{"x0", c.x0},
               {"steps", tr.steps()},
               {"stop_reason", std::string(to_string(tr.stop_reason))},
               {"r_hat", est.r_hat},
               {"uncertainty", est.uncertainty}};
    }
    pred.bind_r_inf(*r_inf);
  }
  ordered_json j = to_json(pred);
  j["calibration"] = calib;
  write_json(fs::path(c.out) / "prediction.json", j);
  out << j.dump(2) << '\n';
  return 0;
}

inline void write_quotient_rows(std::ostream& os, std::size_t n, double q, const char* prefix = "") {
  os << prefix << n << ',' << fmt17(saturate(q)) << ',' << (std::isinf(q) ? 1 : 0) << '\n';
}

inline int cmd_compare(const ExperimentConfig& c, std::ostream& out) {
  c.validate();
  const ScalarConvexFunction f = make_function(c.function);
  const PlaneTrace m = run_map(f, c.x0, c.iters, c.prox);
  const PlaneTrace d = run_dra(f, c.x0, c.iters, c.prox);
  const fs::path dir(c.out);
  {
    std::ofstream os = open_out(dir / "map.csv");
    write_trace_csv(os, m);
  }
  {
    std::ofstream os = open_out(dir / "dra.csv");
    write_trace_csv(os, d);
  }
  const std::vector<double> q = quotient_sequence(m, d, c.iters + 1);
  {
    std::ofstream os = open_out(dir / "quotient.csv");
    os << "n,quotient,underflow\n";
    for (std::size_t n = 0; n < q.size(); ++n) write_quotient_rows(os, n, q[n]);
  }
  ordered_json manifest;
  manifest["command"] = "compare";
  manifest["config"] = c.to_json();
  manifest["map_stop_reason"] = std::string(to_string(m.stop_reason));
  manifest["dra_stop_reason"] = std::string(to_string(d.stop_reason));
  write_json(dir / "manifest.json", manifest);
  for (const char* name : {"map.csv", "dra.csv", "quotient.csv", "manifest.json"}) emit(out, dir / name);
  return 0;
}

struct GridConfig {
  std::size_t points = 41;
  double h = 0.05;
  double p_max = 3.0;
  std::size_t terms = 100;
  double x0 = 1.0;
  std::string out = ".";
  ProxConfig prox;

  std::vector<double> grid() const {
    if (!(h > 0.0) || !(1.0 + h <= p_max)) throw UsageError("grid: need offset > 0 and 1 + offset <= p-max");
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw UsageError("--x0 must be a positive finite number");
    if (terms < 1) throw UsageError("--terms must be >= 1");
    return uniform_grid(1.0 + h, p_max, points);
  }

  ordered_json to_json() const {
    return {{"function", "power_p"}, {"points", points}, {"p_min", 1.0 + h}, {"p_max", p_max},
            {"terms", terms},        {"x0", x0}};
  }
};

inline void add_grid_options(CLI::App* sub, GridConfig& g) {
  sub->add_option("--points", g.points, "number of p values");
  sub->add_option("--offset", g.h, "grid starts at p = 1 + offset");
  sub->add_option("--p-max", g.p_max, "largest p");
  sub->add_option("--terms", g.terms, "terms per sequence (n = 0..terms-1)");
  sub->add_option("--x0", g.x0, "starting point");
  sub->add_option("--out", g.out, "output directory");
}

inline int cmd_figure1(const GridConfig& g, std::ostream& out) {
  const std::vector<GridCell> cells = run_power_grid(g.grid(), g.x0, g.terms, g.prox);
  const fs::path dir(g.out);
  for (const char* alg : {"map", "dra"}) {
    const fs::path p = dir / (std::string("fig1_") + alg + ".csv");
    std::ofstream os = open_out(p);
    os << "p,n,x,underflow\n";
    for (const GridCell& c : cells) {
      const std::vector<double>& xs = std::string(alg) == "map" ? c.map_x : c.dra_x;
      for (std::size_t n = 0; n < xs.size(); ++n) {
        os << fmt17(c.p) << ',' << n << ',' << fmt17(xs[n]) << ',' << (xs[n] == 0.0 ? 1 : 0) << '\n';
      }
    }
    emit(out, p);
  }
  ordered_json manifest;
  manifest["command"] = "figure1";
  manifest["config"] = g.to_json();
  write_json(dir / "fig1_manifest.json", manifest);
  emit(out, dir / "fig1_manifest.json");
  return 0;
}

inline int cmd_figure2(const GridConfig& g, std::ostream& out) {
  const std::vector<GridCell> cells = run_power_grid(g.grid(), g.x0, g.terms, g.prox);
  const fs::path dir(g.out);
  const fs::path p = dir / "fig2_quotient.csv";
  std::ofstream os = open_out(p);
  os << "p,n,quotient,underflow\n";
  for (const GridCell& c : cells) {
    const std::string prefix = fmt17(c.p) + ",";
    for (std::size_t n = 0; n < c.quotient.size(); ++n) write_quotient_rows(os, n, c.quotient[n], prefix.c_str());
  }
  os.close();
  emit(out, p);
  ordered_json manifest;
  manifest["command"] = "figure2";
  manifest["config"] = g.to_json();
  write_json(dir / "fig2_manifest.json", manifest);
  emit(out, dir / "fig2_manifest.json");
  return 0;
}

inline int cmd_table(const std::string& out_dir, std::ostream& out) {
  const ordered_json j = summary_tables();
  write_json(fs::path(out_dir) / "table.json", j);
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace detail

/// Runs the CLI on args (without the program name).
inline int cli_run(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Convergence-rate experiments for PPA, MAP and DRA on scalar convex functions", "slowrate"};
  app.require_subcommand(1);

  ExperimentConfig run_cfg;
  CLI::App* run = app.add_subcommand("run", "run one algorithm and write trace.csv and manifest.json");
  run->add_option("--alg", run_cfg.algorithm, "ppa, map or dra")->required();
  detail::add_run_options(run, run_cfg);
  run->add_option("--stride", run_cfg.stride, "keep every k-th iterate plus a dense tail");

  std::string trace_path;
  bool truncated = false;
  std::string classify_out = ".";
  CLI::App* classify = app.add_subcommand("classify", "classify a trace CSV, writing rate_report.json");
  classify->add_option("--trace", trace_path, "trace CSV with header n,x,r")->required();
  classify->add_flag("--truncated", truncated, "the trace stopped on underflow (waives the minimum length)");
  classify->add_option("--out", classify_out, "output directory");

  ExperimentConfig pred_cfg;
  pred_cfg.iters = 10000;
  std::optional<double> r_inf;
  CLI::App* pred = app.add_subcommand("predict", "theoretical rate, writing prediction.json");
  pred->add_option("--alg", pred_cfg.algorithm, "ppa, map or dra")->required();
  detail::add_run_options(pred, pred_cfg);
  pred->add_option("--r-inf", r_inf, "use this r_inf instead of a DRA calibration run");

  ExperimentConfig cmp_cfg;
  cmp_cfg.iters = 100;
  CLI::App* compare = app.add_subcommand("compare", "MAP and DRA side by side plus x_n^MAP/x_n^DRA");
  detail::add_run_options(compare, cmp_cfg);

  detail::GridConfig fig1_cfg;
  CLI::App* fig1 = app.add_subcommand("figure1", "MAP and DRA terms over a grid of p (f = |x|^p/p)");
  detail::add_grid_options(fig1, fig1_cfg);
  detail::GridConfig fig2_cfg;
  CLI::App* fig2 = app.add_subcommand("figure2", "x_n^MAP/x_n^DRA over a grid of p");
  detail::add_grid_options(fig2, fig2_cfg);

  std::string table_out = ".";
  CLI::App* table = app.add_subcommand("table", "predicted rates by exponent regime, as JSON");
  table->add_option("--out", table_out, "output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "slowrate: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run) return detail::cmd_run(run_cfg, out);
    if (*classify) return detail::cmd_classify(trace_path, truncated, classify_out, out);
    if (*pred) return detail::cmd_predict(pred_cfg, r_inf, out);
    if (*compare) return detail::cmd_compare(cmp_cfg, out);
    if (*fig1) return detail::cmd_figure1(fig1_cfg, out);
    if (*fig2) return detail::cmd_figure2(fig2_cfg, out);
    if (*table) return detail::cmd_table(table_out, out);
  } catch (const UsageError& e) {
    err << "slowrate: usage: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "slowrate: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace slowrate::expcli

#endif  // SLOWRATE_EXPCLI_CLI_HPP
