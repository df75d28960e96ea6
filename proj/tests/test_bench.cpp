#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dmd/bench/commands.hpp"

using namespace dmd;
using namespace dmd::bench;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("dmd_test_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::config);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

}  // namespace

TEST(Config, RoundTrip) {
  const std::string text = R"({"problem": "cross_entropy", "family": {"name": "kls", "kappa": 0.5, "r": 0.25},
    "rule": "mmd", "eta": 0.05, "schedule": "inverse_sqrt", "iterations": 300, "tolerance": 1e-9,
    "weight_floor": 1e-10, "seed": 42, "init": "random", "output": "trace.csv",
    "grid": {"eta": [0.01, 0.1], "r": [0.0, 0.1]}})";
  const RunConfig a = parse_config_text(text);
  EXPECT_EQ(a.family, EntropyParams::kls(0.5, 0.25));
  EXPECT_EQ(a.projection, Projection::simplex_normalize);
  const RunConfig b = parse_config(to_json(a));
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Config, DefaultsRoundTrip) {
  const RunConfig a = parse_config_text("{}");
  EXPECT_EQ(a.problem, "quadratic");
  EXPECT_EQ(a.projection, Projection::none);
  EXPECT_EQ(parse_config(to_json(a)), a);
}

TEST(Config, Diagnostics) {
  EXPECT_NE(config_error(R"({"problem": "quadratic", "colour": 1})").find("'colour'"), std::string::npos);
  EXPECT_NE(config_error(R"({"family": {"name": "tsallis"}})").find("family.q"), std::string::npos);
  EXPECT_NE(config_error(R"({"family": {"name": "tsallis", "q": 0.5, "kappa": 1}})").find("family.kappa"), std::string::npos);
  EXPECT_NE(config_error(R"({"rule": "adam"})").find("allowed"), std::string::npos);
  EXPECT_NE(config_error(R"({"eta": -1})").find("eta"), std::string::npos);
  EXPECT_NE(config_error(R"({"iterations": 2.5})").find("iterations"), std::string::npos);
  EXPECT_NE(config_error(R"({"grid": {"kappa": [0.1]}})").find("grid.kappa"), std::string::npos);
  EXPECT_NE(config_error("{\n  \"eta\": 0.1,\n  \"rule\" \"gd\"\n}").find("line 3"), std::string::npos);
}

TEST(Config, SeedOverrideFromEnvironment) {
  const auto path = write_temp("seed.json", R"({"seed": 5})");
  unsetenv("DM_SEED");
  EXPECT_EQ(load_config(path).seed, 5u);
  setenv("DM_SEED", "77", 1);
  EXPECT_EQ(load_config(path).seed, 77u);
  setenv("DM_SEED", "x", 1);
  EXPECT_THROW(load_config(path), error);
  unsetenv("DM_SEED");
}

TEST(Grid, Specs) {
  EXPECT_EQ(parse_grid("0.5,1,2"), (std::vector<double>{0.5, 1.0, 2.0}));
  const auto lin = parse_grid("0:1:5");
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[2], 0.5);
  EXPECT_EQ(lin.back(), 1.0);
  const auto lg = parse_grid("log:0.01:100:5");
  ASSERT_EQ(lg.size(), 5u);
  EXPECT_NEAR(lg[2], 1.0, 1e-15);
  EXPECT_EQ(parse_grid("3:9:1"), std::vector<double>{3.0});
  EXPECT_THROW(parse_grid("1:2"), error);
  EXPECT_THROW(parse_grid("a,b"), error);
  EXPECT_THROW(parse_grid("log:-1:1:3"), error);
  const auto axis = parse_param_axis("q=0.5,1.5");
  EXPECT_EQ(axis.first, "q");
  EXPECT_EQ(axis.second.size(), 2u);
  EXPECT_THROW(parse_param_axis("0.5"), error);
}

TEST(Grid, CartesianOrder) {
  const auto cells = cartesian({{"q", {0.5, 1.0, 1.5}}, {"eta", {0.01, 0.1, 1.0}}});
  ASSERT_EQ(cells.size(), 9u);
  EXPECT_EQ(cells[0], (std::vector<double>{0.5, 0.01}));
  EXPECT_EQ(cells[1], (std::vector<double>{0.5, 0.1}));
  EXPECT_EQ(cells[8], (std::vector<double>{1.5, 1.0}));
  EXPECT_TRUE(cartesian({}).empty());
  EXPECT_TRUE(cartesian({{"q", {}}}).empty());
}

TEST(Csv, QuotingAndFormatting) {
  EXPECT_EQ(csv_field(std::string("plain")), "plain");
  EXPECT_EQ(csv_field(std::string("a,b")), "\"a,b\"");
  EXPECT_EQ(csv_field(std::string("say \"hi\"")), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field(0.1), "0.1");
  EXPECT_EQ(csv_field(1e-300), "1e-300");
  std::ostringstream out;
  write_row(out, {"x", "tsallis(q=0.5)", "kls(kappa=0.5,r=0.2)"});
  EXPECT_EQ(out.str(), "x,tsallis(q=0.5),\"kls(kappa=0.5,r=0.2)\"\n");
}

TEST(Problems, GradientsAndOptima) {
  for (const auto& name : problem_names()) {
    const Problem p = make_problem(name);
    EXPECT_EQ(p.dimension, 5u);
    EXPECT_NO_THROW(check_gradient(p, 99)) << name;
    if (p.optimum && p.optimal_value) {
      EXPECT_NEAR(p.loss(*p.optimum), *p.optimal_value, 1e-14) << name;
      if (p.domain == Domain::positive_orthant) {
        EXPECT_LE(sup_norm(p.gradient(*p.optimum)), 1e-14) << name;
      }
    }
  }
  EXPECT_THROW(make_problem("rosenbrock"), error);
}

TEST(Problems, QuadraticSpectrum) {
  // The gradient is affine, so Hessian columns are gradient differences.
  const Problem p = quadratic();
  const auto& opt = *p.optimum;
  const auto g0 = p.gradient(opt);
  std::vector<std::vector<double>> h(5, std::vector<double>(5));
  for (std::size_t j = 0; j < 5; ++j) {
    auto w = opt;
    w[j] += 1.0;
    const auto g = p.gradient(w);
    for (std::size_t i = 0; i < 5; ++i) h[i][j] = g[i] - g0[i];
  }
  double trace = 0.0, frob = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    trace += h[i][i];
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_NEAR(h[i][j], h[j][i], 1e-12);
      frob += h[i][j] * h[i][j];
    }
  }
  // Eigenvalues 1, 3.25, 5.5, 7.75, 10.
  EXPECT_NEAR(trace, 27.5, 1e-12);
  EXPECT_NEAR(frob, 1.0 + 3.25 * 3.25 + 5.5 * 5.5 + 7.75 * 7.75 + 100.0, 1e-10);
  // Power iteration on H and on 10 I - H pins both ends of the spectrum.
  auto top = [&](double shift, double sign) {
    std::vector<double> v{1.0, 0.3, -0.7, 0.2, 0.9}, hv(5);
    double lambda = 0.0;
    for (int it = 0; it < 2000; ++it) {
      double nrm = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        hv[i] = shift * v[i];
        for (std::size_t j = 0; j < 5; ++j) hv[i] += sign * h[i][j] * v[j];
        nrm += hv[i] * hv[i];
      }
      nrm = std::sqrt(nrm);
      lambda = 0.0;
      for (std::size_t i = 0; i < 5; ++i) lambda += v[i] * hv[i];
      for (std::size_t i = 0; i < 5; ++i) v[i] = hv[i] / nrm;
    }
    return lambda;
  };
  EXPECT_NEAR(top(0.0, 1.0), 10.0, 1e-9);
  EXPECT_NEAR(10.0 - top(10.0, -1.0), 1.0, 1e-9);
}

TEST(Problems, CrossEntropyOptimumIsTarget) {
  const Problem p = cross_entropy();
  const auto w = WeightVector(*p.optimum, Domain::unit_simplex);
  EXPECT_LE(sup_norm(normalized_gradient(w, p.gradient(w.values()))), 1e-14);
}

TEST(Commands, ExitCodeMapping) {
  EXPECT_EQ(exit_code_for(error(errc::config, "")), kUsage);
  EXPECT_EQ(exit_code_for(error(errc::parameter, "")), kUsage);
  EXPECT_EQ(exit_code_for(error(errc::overflow, "")), kDiverged);
  EXPECT_EQ(exit_code_for(error(errc::degenerate, "")), kDiverged);
}

TEST(Commands, EvalSchemaAndSymmetry) {
  const auto path = (std::filesystem::temp_directory_path() / "dmd_test_eval.csv").string();
  std::ostringstream err;
  ASSERT_EQ(cmd_eval({"kaniadakis", {{"kappa", {-0.4, 0.4}}}, "0.5,1,2", path, "", false}, err), kOk) << err.str();
  std::istringstream in(read_file(path));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "setting,x,log_d,exp_d,dlog_d");
  std::vector<std::string> minus, plus;
  for (std::string line; std::getline(in, line);) {
    const auto tail = line.substr(line.find(','));
    (line.rfind("kaniadakis(kappa=-0.4)", 0) == 0 ? minus : plus).push_back(tail);
    if (tail.rfind(",1,", 0) == 0) {
      EXPECT_NE(tail.find(",1,0,"), std::string::npos) << line;
    }
  }
  EXPECT_EQ(minus.size(), 3u);
  EXPECT_EQ(minus, plus);
}

TEST(Commands, EvalRejectsInvalidSettings) {
  std::ostringstream err;
  EXPECT_EQ(cmd_eval({"tsallis", {{"q", {-1.0}}}, "0.5,1", "", "", false}, err), kUsage);
  EXPECT_EQ(cmd_eval({"tsallis", {{"q", {-1.0}}}, "0.5,1", "/dev/null", "", true}, err), kOk);
  EXPECT_EQ(cmd_eval({"kls", {{"kappa", {0.5}}, {"r", {0.6}}}, "0.5,1", "/dev/null", "", true}, err), kUsage);
  EXPECT_EQ(cmd_eval({"gamma", {}, "0.5,1", "", "", false}, err), kUsage);
}

TEST(Commands, EvalPlotFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "dmd_test_plots";
  std::filesystem::remove_all(dir);
  std::ostringstream err;
  ASSERT_EQ(cmd_eval({"tsallis", {{"q", {0.5}}}, "1:2:3", "/dev/null", dir.string(), false}, err), kOk);
  EXPECT_EQ(read_file((dir / "tsallis_q_0.5__log.dat").string()), "1 0\n1.5 " + format_double(log_d(EntropyParams::tsallis(0.5), 1.5)) + "\n2 " + format_double(log_d(EntropyParams::tsallis(0.5), 2.0)) + "\n");
  EXPECT_TRUE(std::filesystem::exists(dir / "tsallis_q_0.5__exp.dat"));
  EXPECT_TRUE(std::filesystem::exists(dir / "tsallis_q_0.5__dlog.dat"));
}

TEST(Commands, SweepRowsAndEmptyGrid) {
  const auto out = (std::filesystem::temp_directory_path() / "dmd_test_sweep.csv").string();
  const auto cfg = write_temp("sweep.json", R"({"problem": "quadratic", "family": {"name": "tsallis", "q": 1},
    "rule": "geg_product", "iterations": 20, "grid": {"q": [0.5, 1, 1.5], "eta": [0.01, 0.02, 0.05]}})");
  std::ostringstream err;
  ASSERT_EQ(cmd_sweep({cfg, out, 3}, err), kOk) << err.str();
  const std::string text = read_file(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "cell,q,eta,family,rule,iterations,final_loss,gap,distance_to_optimum,termination,error");
  // Same CSV on a single thread.
  ASSERT_EQ(cmd_sweep({cfg, out + ".1", 1}, err), kOk);
  EXPECT_EQ(read_file(out + ".1"), text);

  const auto empty = write_temp("empty.json", R"({"grid": {}})");
  ASSERT_EQ(cmd_sweep({empty, out, 2}, err), kOk);
  EXPECT_EQ(read_file(out), "cell,family,rule,iterations,final_loss,gap,distance_to_optimum,termination,error\n");
}

TEST(Commands, SweepRecordsCellErrors) {
  const auto out = (std::filesystem::temp_directory_path() / "dmd_test_sweep_err.csv").string();
  const auto cfg = write_temp("sweep_err.json", R"({"family": {"name": "tsallis", "q": 1.5}, "iterations": 5,
    "grid": {"eta": [0.01, 50]}})");
  std::ostringstream err;
  EXPECT_EQ(cmd_sweep({cfg, out, 2}, err), kOk);
  const std::string text = read_file(out);
  EXPECT_NE(text.find("overflow: iteration 1"), std::string::npos) << text;

  const auto all_bad = write_temp("sweep_bad.json", R"({"family": {"name": "tsallis", "q": 1.5}, "iterations": 5,
    "grid": {"eta": [50, 60]}})");
  EXPECT_EQ(cmd_sweep({all_bad, out, 2}, err), kDiverged);
}

TEST(Commands, OptimizeTraceAndSummary) {
  const auto out = (std::filesystem::temp_directory_path() / "dmd_test_opt.csv").string();
  const auto cfg = write_temp("opt.json", R"({"problem": "quadratic", "rule": "gd", "eta": 0.1, "iterations": 3})");
  std::ostringstream info, err;
  ASSERT_EQ(cmd_optimize({cfg, out}, info, err), kOk) << err.str();
  const std::string text = read_file(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), "iter,loss,grad_norm,min_w,clips");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  EXPECT_EQ(info.str().rfind("summary iterations=3 final_loss=", 0), 0u) << info.str();
  EXPECT_NE(info.str().find("termination=max_iters"), std::string::npos);

  const auto bad = write_temp("opt_bad.json", R"({"rule": "nope"})");
  EXPECT_EQ(cmd_optimize({bad, out}, info, err), kUsage);
  const auto pole = write_temp("opt_pole.json", R"({"family": {"name": "tsallis", "q": 1.5}, "eta": 50})");
  EXPECT_EQ(cmd_optimize({pole, out}, info, err), kDiverged);
}

TEST(Commands, VerifyInjectedInvalidFamily) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify({"none", "tsallis", {{"q", {-1.0}}}}, out, err), kVerifyFailed);
  EXPECT_NE(out.str().find("status=fail"), std::string::npos);
  EXPECT_NE(out.str().find("verify summary checks=1 failed=1"), std::string::npos);
  std::ostringstream ok;
  EXPECT_EQ(cmd_verify({"none", "tsallis", {{"q", {0.5}}}}, ok, err), kOk);
  EXPECT_EQ(cmd_verify({"bogus", "", {}}, ok, err), kUsage);
}

TEST(Verify, EquivalenceSuiteCoversSimplifiedIdentity) {
  bool found = false;
  for (const auto& c : run_suite("equivalence")) {
    EXPECT_TRUE(c.passed) << c.name << " " << c.detail;
    if (c.criterion == 5 && c.name.find("simplified") != std::string::npos) found = true;
  }
  EXPECT_TRUE(found);
}
