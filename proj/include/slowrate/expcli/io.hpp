#ifndef SLOWRATE_EXPCLI_IO_HPP
#define SLOWRATE_EXPCLI_IO_HPP

// Trace CSV (header n,x,r; 17 significant digits so values round-trip) and
// JSON renderings of reports and predictions.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slowrate/drivers.hpp"
#include "slowrate/errors.hpp"
#include "slowrate/expcli/function_spec.hpp"
#include "slowrate/ratekit.hpp"

namespace slowrate::expcli {

using nlohmann::ordered_json;

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Largest finite double stands in for +inf in CSV output (with a flag).
inline double saturate(double v) {
  if (std::isinf(v)) return v > 0 ? std::numeric_limits<double>::max() : -std::numeric_limits<double>::max();
  return v;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw InputError("cannot open '" + p.string() + "' for writing");
  return os;
}

inline void write_trace_csv(std::ostream& os, const ScalarTrace& tr) {
  os << "n,x,r\n";
  for (std::size_t i = 0; i < tr.xs.size(); ++i) os << tr.index(i) << ',' << fmt17(tr.xs[i]) << ",\n";
}

inline void write_trace_csv(std::ostream& os, const PlaneTrace& tr) {
  os << "n,x,r\n";
  for (std::size_t i = 0; i < tr.zs.size(); ++i) {
    os << tr.index(i) << ',' << fmt17(tr.zs[i].x) << ',' << fmt17(tr.zs[i].r) << '\n';
  }
}

struct TraceTable {
  std::vector<std::size_t> n;
  std::vector<double> x;
  std::vector<std::optional<double>> r;
};

inline TraceTable read_trace_csv(std::istream& is, const std::string& name = "trace") {
  std::string line;
  if (!std::getline(is, line)) throw InputError(name + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,x,r" && line != "n,x") throw InputError(name + ": expected header 'n,x,r', got '" + line + "'");
  TraceTable t;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() < 2 || cells.size() > 3) throw InputError(name + ":" + std::to_string(lineno) + ": bad row");
    try {
      const double nv = parse_double(cells[0], "column n");
      if (nv < 0 || nv != std::floor(nv)) throw InputError("n must be a nonnegative integer");
      t.n.push_back(static_cast<std::size_t>(nv));
      t.x.push_back(parse_double(cells[1], "column x"));
      if (cells.size() == 3 && !cells[2].empty()) {
        t.r.emplace_back(parse_double(cells[2], "column r"));
      } else {
        t.r.emplace_back();
      }
    } catch (const Error& e) {
      throw InputError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (t.n.size() > 1 && t.n.back() <= t.n[t.n.size() - 2]) {
      throw InputError(name + ":" + std::to_string(lineno) + ": n must increase");
    }
  }
  if (t.n.empty()) throw InputError(name + ": no data rows");
  return t;
}

inline TraceTable read_trace_csv(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw InputError("cannot open trace '" + p.string() + "'");
  return read_trace_csv(is, p.string());
}

inline ordered_json opt_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

inline ordered_json to_json(const RateReport& r) {
  ordered_json j;
  j["category"] = std::string(to_string(r.category));
  j["estimated_order"] = opt_json(r.estimated_order);
  j["estimated_ratio_c"] = opt_json(r.estimated_ratio_c);
  j["estimated_exponent"] = opt_json(r.estimated_exponent);
  j["estimated_constant"] = opt_json(r.estimated_constant);
  j["tail_window"] = {{"first", r.tail_first}, {"last", r.tail_last}};
  const RateDiagnostics& d = r.diagnostics;
  j["diagnostics"] = {{"ratio_tail", d.ratio_tail},
                      {"diff_ratio_tail", d.diff_ratio_tail},
                      {"ratio_min", d.ratio_min},
                      {"ratio_max", d.ratio_max},
                      {"diff_ratio_max_dev", d.diff_ratio_max_dev},
                      {"order_samples", d.order_samples},
                      {"low_sample_count", d.low_sample_count}};
  return j;
}

inline ordered_json to_json(const RatePrediction& p) {
  ordered_json j;
  j["algorithm"] = std::string(to_string(p.algorithm));
  j["function"] = p.function;
  j["category"] = std::string(to_string(p.category));
  j["order"] = opt_json(p.order);
  j["rate"] = opt_json(p.rate);
  j["exponent"] = opt_json(p.exponent);
  j["constant"] = opt_json(p.constant);
  j["rate_formula"] = p.rate_formula.empty() ? ordered_json(nullptr) : ordered_json(p.rate_formula);
  j["constant_formula"] = p.constant_formula.empty() ? ordered_json(nullptr) : ordered_json(p.constant_formula);
  j["r_inf"] = opt_json(p.r_inf);
  j["source"] = p.source;
  j["available"] = p.available();
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

inline void write_json(const std::filesystem::path& p, const ordered_json& j) {
  std::ofstream os = open_out(p);
  os << j.dump(2) << '\n';
}

}  // namespace slowrate::expcli

#endif  // SLOWRATE_EXPCLI_IO_HPP
