#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmd/bench/commands.hpp"

namespace {

dmd::bench::ParamAxes parse_axes(const std::vector<std::string>& raw) {
  dmd::bench::ParamAxes axes;
  for (const auto& r : raw) axes.push_back(dmd::bench::parse_param_axis(r));
  return axes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed-logarithm mirror descent harness"};
  app.require_subcommand(1);

  dmd::bench::EvalOptions eval;
  std::vector<std::string> eval_params;
  auto* ev = app.add_subcommand("eval", "Tabulate log_d, exp_d and dlog_d of a family on an x grid");
  ev->add_option("--family", eval.family, "Family name")->required();
  ev->add_option("--param", eval_params, "Hyperparameter values, name=v1,v2,... (repeatable)");
  ev->add_option("--grid", eval.grid, "x grid: lo:hi:n, log:lo:hi:n or v1,v2,...");
  ev->add_option("--out", eval.out, "CSV path (default stdout)");
  ev->add_option("--plot-dir", eval.plot_dir, "Directory for two-column .dat series");
  ev->add_flag("--allow-nonconcave", eval.allow_nonconcave, "Accept monotone but non-concave settings");

  dmd::bench::OptimizeOptions optimize;
  auto* op = app.add_subcommand("optimize", "Run one optimizer configuration and write its trace");
  op->add_option("--config", optimize.config, "JSON config")->required();
  op->add_option("--out", optimize.out, "Trace CSV path (overrides the config's output)");

  dmd::bench::SweepOptions sweep;
  auto* sw = app.add_subcommand("sweep", "Run the Cartesian grid of a config");
  sw->add_option("--config", sweep.config, "JSON config with a grid")->required();
  sw->add_option("--out", sweep.out, "CSV path (overrides the config's output)");
  sw->add_option("--threads", sweep.threads, "Worker threads (0: hardware)");

  dmd::bench::VerifyOptions verify;
  std::vector<std::string> verify_params;
  auto* ve = app.add_subcommand("verify", "Run invariant suites");
  ve->add_option("--suite", verify.suite, "roundtrip, algebra, derivatives, equivalence, simplex, descent, all or none");
  ve->add_option("--family", verify.family, "Also validate this family");
  ve->add_option("--param", verify_params, "Hyperparameter for --family, name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dmd::bench::kUsage;
  }

  try {
    if (ev->parsed()) {
      eval.params = parse_axes(eval_params);
      return dmd::bench::cmd_eval(eval);
    }
    if (op->parsed()) return dmd::bench::cmd_optimize(optimize);
    if (sw->parsed()) return dmd::bench::cmd_sweep(sweep);
    if (ve->parsed()) {
      verify.params = parse_axes(verify_params);
      return dmd::bench::cmd_verify(verify);
    }
  } catch (const dmd::error& e) {
    std::cerr << "dmd: " << e.what() << '\n';
    return dmd::bench::kUsage;
  }
  return dmd::bench::kUsage;
}
