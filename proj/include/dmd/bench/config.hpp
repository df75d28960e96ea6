#pragma once

// JSON run configuration. Schema (all keys optional except where noted):
//
//   problem       "quadratic" | "cross_entropy" | "nnls"
//   family        {"name": <family>, <hyperparameters>}
//                 shannon; tsallis: q; kaniadakis: kappa;
//                 schwammle_tsallis: q, q_prime; corcino: q, q_prime, r;
//                 kls: kappa, r; euler: a, b
//   rule          "gd" | "egu" | "geg_product" | "geg_simplified_q" | "mmd"
//   projection    "none" | "clip_nonneg" | "simplex_normalize"
//                 (default: simplex_normalize on simplex problems, else none)
//   eta, schedule ("constant" | "inverse_sqrt"), iterations, tolerance,
//   weight_floor, seed, init ("default" | "random"), output
//   grid          {"eta": [...], "<hyperparameter>": [...]}   (sweep only)
//
// Unknown keys are rejected.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmd/bench/problems.hpp"
#include "dmd/optim.hpp"
#include "dmd/params.hpp"

namespace dmd::bench {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string problem = "quadratic";
  EntropyParams family = EntropyParams::shannon();
  RuleKind rule = RuleKind::geg_product;
  Projection projection = Projection::none;
  double eta = 0.01;
  Schedule schedule = Schedule::constant;
  int iterations = 1000;
  double tolerance = 1e-10;
  double weight_floor = 1e-12;
  std::uint64_t seed = 0;
  std::string init = "default";
  std::string output;
  std::vector<std::pair<std::string, std::vector<double>>> grid;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& field, const std::string& msg) {
  throw error(errc::config, "field '" + field + "': " + msg);
}

inline double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) config_fail(field, "expected a number");
  return j.get<double>();
}

inline std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) config_fail(field, "expected a string");
  return j.get<std::string>();
}

template <class E, std::size_t N>
E parse_enum(const json& j, const std::string& field, const std::pair<const char*, E> (&table)[N]) {
  const std::string s = get_string(j, field);
  for (const auto& [name, value] : table)
    if (s == name) return value;
  std::string allowed;
  for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  config_fail(field, "unknown value '" + s + "' (allowed: " + allowed + ")");
}

inline constexpr std::pair<const char*, RuleKind> kRules[] = {
    {"gd", RuleKind::gradient_descent}, {"egu", RuleKind::egu}, {"geg_product", RuleKind::geg_product},
    {"geg_simplified_q", RuleKind::geg_simplified_q}, {"mmd", RuleKind::mmd_diagonal}};
inline constexpr std::pair<const char*, Projection> kProjections[] = {
    {"none", Projection::none}, {"clip_nonneg", Projection::clip_nonneg}, {"simplex_normalize", Projection::simplex_normalize}};
inline constexpr std::pair<const char*, Schedule> kSchedules[] = {
    {"constant", Schedule::constant}, {"inverse_sqrt", Schedule::inverse_sqrt}};

}  // namespace detail

/// Hyperparameter names of a family, in constructor order.
inline std::vector<std::string> parameter_names(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::shannon: return {};
    case FamilyTag::tsallis: return {"q"};
    case FamilyTag::kaniadakis: return {"kappa"};
    case FamilyTag::schwammle_tsallis: return {"q", "q_prime"};
    case FamilyTag::corcino: return {"q", "q_prime", "r"};
    case FamilyTag::kls: return {"kappa", "r"};
    case FamilyTag::euler: return {"a", "b"};
  }
  return {};
}

inline FamilyTag family_tag(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(FamilyTag::euler); ++i) {
    const auto tag = static_cast<FamilyTag>(i);
    if (name == family_name(tag)) return tag;
  }
  throw error(errc::config, "unknown family '" + name + "'");
}

inline std::vector<double> parameter_values(const EntropyParams& p) {
  return std::visit(overloaded{
                        [](const Shannon&) { return std::vector<double>{}; },
                        [](const Tsallis& f) { return std::vector<double>{f.q}; },
                        [](const Kaniadakis& f) { return std::vector<double>{f.kappa}; },
                        [](const SchwammleTsallis& f) { return std::vector<double>{f.q, f.q_prime}; },
                        [](const Corcino& f) { return std::vector<double>{f.q, f.q_prime, f.r}; },
                        [](const Kls& f) { return std::vector<double>{f.kappa, f.r}; },
                        [](const Euler& f) { return std::vector<double>{f.a, f.b}; },
                    },
                    p.family());
}

inline EntropyParams make_params(FamilyTag tag, const std::vector<double>& v) {
  if (v.size() != parameter_names(tag).size())
    throw error(errc::config, std::string(family_name(tag)) + " takes " + std::to_string(parameter_names(tag).size()) + " parameters");
  switch (tag) {
    case FamilyTag::shannon: return EntropyParams::shannon();
    case FamilyTag::tsallis: return EntropyParams::tsallis(v[0]);
    case FamilyTag::kaniadakis: return EntropyParams::kaniadakis(v[0]);
    case FamilyTag::schwammle_tsallis: return EntropyParams::schwammle_tsallis(v[0], v[1]);
    case FamilyTag::corcino: return EntropyParams::corcino(v[0], v[1], v[2]);
    case FamilyTag::kls: return EntropyParams::kls(v[0], v[1]);
    case FamilyTag::euler: return EntropyParams::euler(v[0], v[1]);
  }
  throw error(errc::config, "unknown family");
}

/// Copy of `p` with hyperparameter `name` replaced.
inline EntropyParams with_parameter(const EntropyParams& p, const std::string& name, double value) {
  const auto names = parameter_names(p.tag());
  auto values = parameter_values(p);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) {
      values[i] = value;
      return make_params(p.tag(), values);
    }
  }
  throw error(errc::config, std::string(family_name(p.tag())) + " has no parameter '" + name + "'");
}

inline EntropyParams parse_family(const json& j) {
  if (!j.is_object()) detail::config_fail("family", "expected an object");
  if (!j.contains("name")) detail::config_fail("family.name", "missing");
  const FamilyTag tag = family_tag(detail::get_string(j["name"], "family.name"));
  const auto names = parameter_names(tag);
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (std::find(names.begin(), names.end(), key) == names.end())
      detail::config_fail("family." + key, "unknown parameter for " + std::string(family_name(tag)));
  }
  std::vector<double> values;
  for (const auto& n : names) {
    if (!j.contains(n)) detail::config_fail("family." + n, "missing");
    values.push_back(detail::get_number(j[n], "family." + n));
  }
  return make_params(tag, values);
}

inline json family_to_json(const EntropyParams& p) {
  json j;
  j["name"] = family_name(p.tag());
  const auto names = parameter_names(p.tag());
  const auto values = parameter_values(p);
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = values[i];
  return j;
}

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw error(errc::config, "config root must be an object");
  static const char* const known[] = {"problem", "family", "rule", "projection", "eta", "schedule", "iterations",
                                      "tolerance", "weight_floor", "seed", "init", "output", "grid"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      detail::config_fail(key, "unknown field");
  }
  RunConfig c;
  if (j.contains("problem")) {
    c.problem = detail::get_string(j["problem"], "problem");
    const auto names = problem_names();
    if (std::find(names.begin(), names.end(), c.problem) == names.end()) detail::config_fail("problem", "unknown problem '" + c.problem + "'");
  }
  if (j.contains("family")) c.family = parse_family(j["family"]);
  if (j.contains("rule")) c.rule = detail::parse_enum(j["rule"], "rule", detail::kRules);
  c.projection = c.problem == "cross_entropy" ? Projection::simplex_normalize : Projection::none;
  if (j.contains("projection")) c.projection = detail::parse_enum(j["projection"], "projection", detail::kProjections);
  if (j.contains("eta")) {
    c.eta = detail::get_number(j["eta"], "eta");
    if (!(c.eta > 0.0)) detail::config_fail("eta", "must be positive");
  }
  if (j.contains("schedule")) c.schedule = detail::parse_enum(j["schedule"], "schedule", detail::kSchedules);
  if (j.contains("iterations")) {
    if (!j["iterations"].is_number_integer() || j["iterations"].get<long long>() < 0)
      detail::config_fail("iterations", "expected a nonnegative integer");
    c.iterations = j["iterations"].get<int>();
  }
  if (j.contains("tolerance")) {
    c.tolerance = detail::get_number(j["tolerance"], "tolerance");
    if (!(c.tolerance >= 0.0)) detail::config_fail("tolerance", "must be nonnegative");
  }
  if (j.contains("weight_floor")) {
    c.weight_floor = detail::get_number(j["weight_floor"], "weight_floor");
    if (!(c.weight_floor > 0.0 && c.weight_floor <= 1e-6)) detail::config_fail("weight_floor", "must lie in (0, 1e-6]");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) detail::config_fail("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("init")) {
    c.init = detail::get_string(j["init"], "init");
    if (c.init != "default" && c.init != "random") detail::config_fail("init", "expected 'default' or 'random'");
  }
  if (j.contains("output")) c.output = detail::get_string(j["output"], "output");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) detail::config_fail("grid", "expected an object of arrays");
    const auto names = parameter_names(c.family.tag());
    for (const auto& [key, value] : g.items()) {
      if (key != "eta" && std::find(names.begin(), names.end(), key) == names.end())
        detail::config_fail("grid." + key, "not eta or a parameter of " + std::string(family_name(c.family.tag())));
      if (!value.is_array()) detail::config_fail("grid." + key, "expected an array");
      std::vector<double> vals;
      for (const auto& v : value) vals.push_back(detail::get_number(v, "grid." + key));
      c.grid.emplace_back(key, std::move(vals));
    }
  }
  return c;
}

inline json to_json(const RunConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["family"] = family_to_json(c.family);
  j["rule"] = to_string(c.rule);
  j["projection"] = to_string(c.projection);
  j["eta"] = c.eta;
  j["schedule"] = to_string(c.schedule);
  j["iterations"] = c.iterations;
  j["tolerance"] = c.tolerance;
  j["weight_floor"] = c.weight_floor;
  j["seed"] = c.seed;
  j["init"] = c.init;
  if (!c.output.empty()) j["output"] = c.output;
  if (!c.grid.empty()) {
    json g = json::object();
    for (const auto& [key, vals] : c.grid) g[key] = vals;
    j["grid"] = g;
  }
  return j;
}

/// Parses JSON text; syntax errors report the line and column.
inline RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw error(errc::config, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": JSON syntax error");
  }
  return parse_config(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config_text(ss.str());
  if (const char* s = std::getenv("DM_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end == s || *end != '\0') throw error(errc::config, "DM_SEED must be a nonnegative integer");
    c.seed = v;
  }
  return c;
}

}  // namespace dmd::bench
