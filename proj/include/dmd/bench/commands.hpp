#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <optional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dmd/bench/config.hpp"
#include "dmd/bench/csv.hpp"
#include "dmd/bench/problems.hpp"
#include "dmd/bench/verify.hpp"
#include "dmd/deformed.hpp"
#include "dmd/optim.hpp"

namespace dmd::bench {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kDiverged = 3 };

/// Errors caused by bad input map to 2, numerical breakdowns to 3.
inline int exit_code_for(const error& e) {
  switch (e.code()) {
    case errc::overflow:
    case errc::non_convergence:
    case errc::degenerate:
    case errc::out_of_range_below:
    case errc::out_of_range_above:
    case errc::singularity:
      return kDiverged;
    default:
      return kUsage;
  }
}

using ParamAxes = std::vector<std::pair<std::string, std::vector<double>>>;

/// Grid spec: "lo:hi:n" (linear), "log:lo:hi:n" (log-spaced) or "v1,v2,...".
inline std::vector<double> parse_grid(const std::string& spec) {
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw error(errc::config, "bad number '" + s + "' in grid '" + spec + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = spec.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  if (sep == ',') {
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(num(p));
    return out;
  }
  const bool log = !parts.empty() && parts[0] == "log";
  if (log) parts.erase(parts.begin());
  if (parts.size() != 3) throw error(errc::config, "grid '" + spec + "' must be lo:hi:n or log:lo:hi:n");
  const double lo = num(parts[0]), hi = num(parts[1]);
  const double nd = num(parts[2]);
  if (nd < 1 || nd != std::floor(nd)) throw error(errc::config, "grid count must be a positive integer");
  const int n = static_cast<int>(nd);
  if (n == 1) return {lo};
  if (log) {
    if (!(lo > 0.0 && hi > 0.0)) throw error(errc::config, "log grid needs positive bounds");
    return log_grid(lo, hi, n);
  }
  return lin_grid(lo, hi, n);
}

/// "name=v1,v2,..." -> axis.
inline std::pair<std::string, std::vector<double>> parse_param_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw error(errc::config, "--param expects name=v1,v2,... got '" + text + "'");
  return {text.substr(0, eq), parse_grid(text.substr(eq + 1))};
}

/// Cartesian product of the axes, last axis fastest. No axes or an empty
/// axis gives no cells.
inline std::vector<std::vector<double>> cartesian(const ParamAxes& axes) {
  std::vector<std::vector<double>> cells;
  if (axes.empty()) return cells;
  for (const auto& [name, vals] : axes)
    if (vals.empty()) return cells;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<double> cell(axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a) cell[a] = axes[a].second[idx[a]];
    cells.push_back(std::move(cell));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return cells;
    }
  }
}

class OutputFile {
 public:
  explicit OutputFile(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw error(errc::config, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

// ---- eval -------------------------------------------------------------------

struct EvalOptions {
  std::string family;
  ParamAxes params;
  std::string grid = "0.1:5:50";
  std::string out;
  std::string plot_dir;
  bool allow_nonconcave = false;
};

inline std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_';
  return out;
}

/// CSV: setting,x,log_d,exp_d,dlog_d; exp_d is evaluated at the grid value
/// and written as nan where the exponential does not exist.
inline int cmd_eval(const EvalOptions& opt, std::ostream& err = std::cerr) {
  try {
    const FamilyTag tag = family_tag(opt.family);
    const auto names = parameter_names(tag);
    ParamAxes axes;
    for (const auto& n : names) {
      auto it = std::find_if(opt.params.begin(), opt.params.end(), [&](const auto& a) { return a.first == n; });
      if (it == opt.params.end()) throw error(errc::config, opt.family + " needs --param " + n + "=...");
      axes.push_back(*it);
    }
    for (const auto& [n, v] : opt.params)
      if (std::find(names.begin(), names.end(), n) == names.end())
        throw error(errc::config, opt.family + " has no parameter '" + n + "'");

    std::vector<EntropyParams> settings;
    if (names.empty()) {
      settings.push_back(make_params(tag, {}));
    } else {
      for (const auto& cell : cartesian(axes)) settings.push_back(make_params(tag, cell));
    }
    for (const auto& p : settings) {
      const auto v = validate(p);
      if (!v.monotone_ok || (!v.concave_ok && !opt.allow_nonconcave)) {
        std::string msg = describe(p) + " failed validation";
        for (const auto& m : v.messages) msg += "; " + m;
        throw error(errc::parameter, msg);
      }
    }
    const auto xs = parse_grid(opt.grid);
    for (double x : xs)
      if (!(x > 0.0)) throw error(errc::config, "eval grid values must be positive");

    OutputFile file(opt.out);
    auto& out = file.stream();
    write_row(out, {"setting", "x", "log_d", "exp_d", "dlog_d"});
    for (const auto& p : settings) {
      std::vector<std::array<double, 4>> rows;
      for (double x : xs) {
        double e;
        try {
          e = exp_d(p, x);
        } catch (const error&) {
          e = std::numeric_limits<double>::quiet_NaN();
        }
        rows.push_back({x, log_d(p, x), e, dlog_d(p, x)});
        write_row(out, {describe(p), csv_field(x), csv_field(rows.back()[1]), csv_field(e), csv_field(rows.back()[3])});
      }
      if (!opt.plot_dir.empty()) {
        std::filesystem::create_directories(opt.plot_dir);
        const char* suffix[] = {"", "log", "exp", "dlog"};
        for (int col = 1; col <= 3; ++col) {
          const auto path = std::filesystem::path(opt.plot_dir) / (slug(describe(p)) + "_" + suffix[col] + ".dat");
          std::ofstream dat(path, std::ios::binary | std::ios::trunc);
          if (!dat) throw error(errc::config, "cannot write '" + path.string() + "'");
          for (const auto& r : rows) dat << format_double(r[0]) << ' ' << format_double(r[col]) << '\n';
        }
      }
    }
    return kOk;
  } catch (const error& e) {
    err << "dmd eval: " << e.what() << '\n';
    return kUsage;
  }
}

// ---- optimize ---------------------------------------------------------------

inline WeightVector initial_point(const Problem& prob, const RunConfig& c) {
  const bool simplex = c.projection == Projection::simplex_normalize;
  std::vector<double> w(prob.dimension, 1.0);
  if (c.init == "random") {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (double& v : w) v = u(rng);
  }
  if (simplex) return WeightVector::normalized(std::move(w));
  return WeightVector(std::move(w));
}

struct RunOutcome {
  RunTrace trace;
  double final_loss = 0.0;
  std::optional<double> gap;
  std::optional<double> distance;
};

inline RunOutcome execute(const RunConfig& c) {
  const Problem prob = make_problem(c.problem);
  OptimizerConfig oc;
  oc.eta = c.eta;
  oc.max_iters = c.iterations;
  oc.grad_tol = c.tolerance;
  oc.weight_floor = c.weight_floor;
  oc.schedule = c.schedule;
  RunOutcome o;
  o.trace = run(prob, c.family, {c.rule, c.projection}, oc, initial_point(prob, c));
  const auto& last = o.trace.records.back();
  o.final_loss = last.loss;
  if (prob.optimal_value) o.gap = last.loss - *prob.optimal_value;
  if (prob.optimum) {
    double d = 0.0;
    for (std::size_t i = 0; i < last.weights.size(); ++i) d += std::pow(last.weights[i] - (*prob.optimum)[i], 2);
    o.distance = std::sqrt(d);
  }
  return o;
}

inline std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : "na"; }

struct OptimizeOptions {
  std::string config;
  std::string out;
};

/// Trace CSV (iter,loss,grad_norm,min_w,clips) plus one summary line.
inline int cmd_optimize(const OptimizeOptions& opt, std::ostream& info = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  try {
    c = load_config(opt.config);
  } catch (const error& e) {
    err << "dmd optimize: " << e.what() << '\n';
    return kUsage;
  }
  try {
    const RunOutcome o = execute(c);
    OutputFile file(opt.out.empty() ? c.output : opt.out);
    auto& out = file.stream();
    write_row(out, {"iter", "loss", "grad_norm", "min_w", "clips"});
    for (const auto& r : o.trace.records)
      write_row(out, {std::to_string(r.iter), csv_field(r.loss), csv_field(r.grad_norm), csv_field(r.min_w), std::to_string(r.clipped)});
    auto& summary = file.to_stdout() ? err : info;
    summary << "summary iterations=" << o.trace.records.back().iter << " final_loss=" << format_double(o.final_loss)
            << " gap=" << opt_field(o.gap) << " distance_to_optimum=" << opt_field(o.distance)
            << " termination=" << to_string(o.trace.termination) << '\n';
    return o.trace.termination == Termination::diverged ? kDiverged : kOk;
  } catch (const error& e) {
    err << "dmd optimize: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

// ---- sweep ------------------------------------------------------------------

struct SweepOptions {
  std::string config;
  std::string out;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// One row per grid cell, in cell order, regardless of thread scheduling.
inline int cmd_sweep(const SweepOptions& opt, std::ostream& err = std::cerr) {
  RunConfig base;
  std::vector<std::vector<double>> cells;
  try {
    base = load_config(opt.config);
    cells = cartesian(base.grid);
    for (const auto& cell : cells) {
      RunConfig c = base;
      for (std::size_t a = 0; a < cell.size(); ++a)
        if (base.grid[a].first != "eta") c.family = with_parameter(c.family, base.grid[a].first, cell[a]);
    }
  } catch (const error& e) {
    err << "dmd sweep: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<std::vector<std::string>> rows(cells.size());
  std::vector<char> failed(cells.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      RunConfig c = base;
      std::vector<std::string> row{std::to_string(i)};
      for (std::size_t a = 0; a < cells[i].size(); ++a) {
        row.push_back(csv_field(cells[i][a]));
        if (base.grid[a].first == "eta")
          c.eta = cells[i][a];
        else
          c.family = with_parameter(c.family, base.grid[a].first, cells[i][a]);
      }
      row.push_back(describe(c.family));
      row.push_back(to_string(c.rule));
      try {
        if (!(c.eta > 0.0)) throw error(errc::config, "eta must be positive");
        const RunOutcome o = execute(c);
        row.insert(row.end(), {std::to_string(o.trace.records.back().iter), csv_field(o.final_loss), opt_field(o.gap),
                               opt_field(o.distance), to_string(o.trace.termination), ""});
        failed[i] = o.trace.termination == Termination::diverged;
      } catch (const std::exception& e) {
        row.insert(row.end(), {"", "", "", "", "error", e.what()});
        failed[i] = 1;
      }
      rows[i] = std::move(row);
    }
  };
  unsigned n = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  try {
    OutputFile file(opt.out.empty() ? base.output : opt.out);
    auto& out = file.stream();
    std::vector<std::string> header{"cell"};
    for (const auto& [name, vals] : base.grid) header.push_back(name);
    header.insert(header.end(), {"family", "rule", "iterations", "final_loss", "gap", "distance_to_optimum", "termination", "error"});
    write_row(out, header);
    for (const auto& r : rows) write_row(out, r);
  } catch (const error& e) {
    err << "dmd sweep: " << e.what() << '\n';
    return kUsage;
  }
  const bool all_failed = !cells.empty() && std::all_of(failed.begin(), failed.end(), [](char f) { return f != 0; });
  return all_failed ? kDiverged : kOk;
}

// ---- verify -----------------------------------------------------------------

struct VerifyOptions {
  std::string suite = "all";
  std::string family;
  ParamAxes params;
};

inline void print_check(std::ostream& out, const Check& c) {
  out << "verify suite=" << c.suite << " check=\"" << c.name << "\" criterion=" << c.criterion
      << " status=" << (c.passed ? "pass" : "fail") << " max_error=" << format_double(c.max_error)
      << " tolerance=" << format_double(c.tolerance);
  if (!c.passed && !c.detail.empty()) out << " detail=\"" << c.detail << "\"";
  out << '\n';
}

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<Check> checks;
  try {
    if (!opt.family.empty()) {
      const FamilyTag tag = family_tag(opt.family);
      std::vector<double> values;
      for (const auto& n : parameter_names(tag)) {
        auto it = std::find_if(opt.params.begin(), opt.params.end(), [&](const auto& a) { return a.first == n; });
        if (it == opt.params.end() || it->second.size() != 1)
          throw error(errc::config, "verify needs exactly one value for --param " + n);
        values.push_back(it->second[0]);
      }
      checks.push_back(validation_check(make_params(tag, values)));
      print_check(out, checks.back());
    }
    std::vector<std::string> suites;
    if (opt.suite == "all")
      suites = suite_names();
    else if (opt.suite != "none")
      suites = {opt.suite};
    for (const auto& s : suites) {
      for (const auto& c : run_suite(s)) {
        checks.push_back(c);
        print_check(out, c);
      }
    }
  } catch (const error& e) {
    err << "dmd verify: " << e.what() << '\n';
    return kUsage;
  }
  const auto failed = std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; });
  out << "verify summary checks=" << checks.size() << " failed=" << failed << '\n';
  return failed ? kVerifyFailed : kOk;
}

}  // namespace dmd::bench
