#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "dmd/algebra.hpp"
#include "dmd/deformed.hpp"
#include "dmd/mirror.hpp"
#include "dmd/problem.hpp"
#include "dmd/weights.hpp"

namespace dmd {

enum class RuleKind { gradient_descent, egu, geg_product, geg_simplified_q, mmd_diagonal };
enum class Projection { none, clip_nonneg, simplex_normalize };
enum class Schedule { constant, inverse_sqrt };

struct UpdateRule {
  RuleKind kind = RuleKind::geg_product;
  Projection projection = Projection::none;
  bool operator==(const UpdateRule&) const = default;
};

struct OptimizerConfig {
  double eta = 0.01;
  int max_iters = 1000;
  double grad_tol = 1e-8;
  double weight_floor = 1e-12;
  Schedule schedule = Schedule::constant;
};

/// Raw step output before flooring / projection.
struct StepResult {
  std::vector<double> values;
  std::size_t clipped = 0;
};

struct TraceRecord {
  int iter = 0;
  double loss = 0.0;
  double grad_norm = 0.0;  // sup-norm; normalized gradient on the simplex
  double min_w = 0.0;
  double max_w = 0.0;
  std::size_t clipped = 0;
  std::size_t floored = 0;
  double step_seconds = 0.0;
  std::vector<double> weights;
};

enum class Termination { converged, max_iters, diverged };

struct RunTrace {
  std::vector<TraceRecord> records;
  Termination termination = Termination::max_iters;
};

inline const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::gradient_descent: return "gd";
    case RuleKind::egu: return "egu";
    case RuleKind::geg_product: return "geg_product";
    case RuleKind::geg_simplified_q: return "geg_simplified_q";
    case RuleKind::mmd_diagonal: return "mmd";
  }
  return "unknown";
}

inline const char* to_string(Projection p) {
  switch (p) {
    case Projection::none: return "none";
    case Projection::clip_nonneg: return "clip_nonneg";
    case Projection::simplex_normalize: return "simplex_normalize";
  }
  return "unknown";
}

inline const char* to_string(Schedule s) { return s == Schedule::constant ? "constant" : "inverse_sqrt"; }

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::diverged: return "diverged";
  }
  return "unknown";
}

namespace detail {

inline void check_step_args(const WeightVector& w, const std::vector<double>& grad, double eta) {
  require_same_size(w.size(), grad.size(), "step");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw error(errc::domain, "learning rate must be positive");
  for (double g : grad)
    if (!std::isfinite(g)) throw error(errc::domain, "gradient must be finite");
}

template <class Fn>
auto per_component(std::size_t i, Fn&& fn) {
  try {
    return fn();
  } catch (const error& e) {
    throw error(e.code(), "component " + std::to_string(i) + ": " + e.detail());
  }
}

}  // namespace detail

/// w - eta * grad
inline StepResult gd_step(const WeightVector& w, const std::vector<double>& grad, double eta) {
  detail::check_step_args(w, grad, eta);
  StepResult r{std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) r.values[i] = w[i] - eta * grad[i];
  return r;
}

/// w * exp(-eta * grad)
inline StepResult egu_step(const WeightVector& w, const std::vector<double>& grad, double eta) {
  detail::check_step_args(w, grad, eta);
  StepResult r{std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) r.values[i] = w[i] * std::exp(-eta * grad[i]);
  return r;
}

/// f^{-1}(f(w) - eta * grad) componentwise.
inline StepResult md_step_explicit(const EuclideanMap&, const WeightVector& w, const std::vector<double>& grad, double eta) {
  return gd_step(w, grad, eta);
}

inline StepResult md_step_explicit(const MirrorMap& map, const WeightVector& w, const std::vector<double>& grad,
                                   double eta) {
  detail::check_step_args(w, grad, eta);
  StepResult r{std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto c = detail::per_component(i, [&] { return exp_d_checked(map.params, log_d(map.params, w[i]) - eta * grad[i]); });
    r.values[i] = c.value;
    r.clipped += c.clipped ? 1 : 0;
  }
  return r;
}

/// w (*)_D exp_D(-eta * grad) componentwise.
inline StepResult geg_step_product(const EntropyParams& params, const WeightVector& w, const std::vector<double>& grad,
                                   double eta) {
  detail::check_step_args(w, grad, eta);
  StepResult r{std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto c = detail::per_component(i, [&] {
      const auto e = exp_d_checked(params, -eta * grad[i]);
      if (e.clipped || e.value == 0.0) return ClipResult{0.0, true};
      return d_prod_checked(params, w[i], e.value);
    });
    r.values[i] = c.value;
    r.clipped += c.clipped ? 1 : 0;
  }
  return r;
}

/// w * exp_q(-eta * w^{q-1} * grad): per-component learning rate eta * w^{q-1}.
inline StepResult geg_step_simplified_q(double q, const WeightVector& w, const std::vector<double>& grad, double eta) {
  detail::check_step_args(w, grad, eta);
  if (!(q > 0.0)) throw error(errc::parameter, "simplified q-GEG needs q > 0");
  StepResult r{std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto c = detail::per_component(i, [&] {
      detail::require_positive(w[i]);
      return detail::tsallis_exp(q, -eta * std::pow(w[i], q - 1.0) * grad[i]);
    });
    r.values[i] = w[i] * c.value;
    r.clipped += c.clipped ? 1 : 0;
  }
  return r;
}

/// [w - eta * (1/dlog(w)) * grad]_+
template <class Map>
StepResult mmd_step(const Map& map, const WeightVector& w, const std::vector<double>& grad, double eta) {
  detail::check_step_args(w, grad, eta);
  const auto d = link_derivative_reciprocal(map, w);
  StepResult r{std::vector<double>(w.size())};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = w[i] - eta * d[i] * grad[i];
    if (v < 0.0) {
      r.values[i] = 0.0;
      ++r.clipped;
    } else {
      r.values[i] = v;
    }
  }
  return r;
}

/// grad - (w^T grad) 1 for simplex iterates.
inline std::vector<double> normalized_gradient(const WeightVector& w, const std::vector<double>& grad) {
  if (!w.on_simplex()) throw error(errc::constraint, "normalized gradient needs a simplex iterate");
  require_same_size(w.size(), grad.size(), "normalized_gradient");
  double wg = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) wg += w[i] * grad[i];
  std::vector<double> out(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) out[i] = grad[i] - wg;
  return out;
}

/// Applies `rule` to (params, w) without projection.
inline StepResult apply_rule(const EntropyParams& params, RuleKind kind, const WeightVector& w,
                             const std::vector<double>& grad, double eta) {
  switch (kind) {
    case RuleKind::gradient_descent: return gd_step(w, grad, eta);
    case RuleKind::egu: return egu_step(w, grad, eta);
    case RuleKind::geg_product: return geg_step_product(params, w, grad, eta);
    case RuleKind::geg_simplified_q: {
      const EntropyParams p = canonicalize(params);
      if (p.tag() == FamilyTag::shannon) return geg_step_simplified_q(1.0, w, grad, eta);
      const auto* t = p.get_if<Tsallis>();
      if (!t) throw error(errc::unsupported_family, "simplified q-GEG needs tsallis params, got " + describe(params));
      return geg_step_simplified_q(t->q, w, grad, eta);
    }
    case RuleKind::mmd_diagonal: return mmd_step(MirrorMap{params}, w, grad, eta);
  }
  throw error(errc::config, "unknown rule");
}

struct ProjectedStep {
  WeightVector weights;
  std::size_t clipped = 0;
  std::size_t floored = 0;
};

/// Normalized scheme: rule applied to the normalized gradient, negative
/// entries clipped, entries raised to the floor, then divided by the 1-norm.
inline ProjectedStep normalized_step(const EntropyParams& params, const WeightVector& w, const std::vector<double>& grad,
                                     double eta, const UpdateRule& rule, double weight_floor = 1e-12) {
  const auto g = normalized_gradient(w, grad);
  auto raw = apply_rule(params, rule.kind, w, g, eta);
  ProjectedStep out;
  out.clipped = raw.clipped;
  double norm = 0.0;
  for (double& v : raw.values) {
    if (v < 0.0) {
      v = 0.0;
      ++out.clipped;
    }
    norm += v;
  }
  if (!(norm >= weight_floor * static_cast<double>(w.size())))
    throw error(errc::degenerate, "1-norm " + format_double(norm) + " below the floor before renormalization");
  for (double& v : raw.values) {
    if (v < weight_floor) {
      v = weight_floor;
      ++out.floored;
    }
  }
  out.weights = WeightVector::normalized(std::move(raw.values));
  return out;
}

/// Floors (and for clip_nonneg, clips) a raw positive-orthant step.
inline ProjectedStep project_orthant(StepResult raw, Projection projection, double weight_floor) {
  ProjectedStep out;
  out.clipped = raw.clipped;
  for (double& v : raw.values) {
    if (!std::isfinite(v)) throw error(errc::overflow, "non-finite weight after step");
    if (v < 0.0 && projection == Projection::clip_nonneg) {
      v = 0.0;
      ++out.clipped;
    }
    if (v < weight_floor) {
      v = weight_floor;
      ++out.floored;
    }
  }
  out.weights = WeightVector(std::move(raw.values));
  return out;
}

struct ClassicalDispatch {
  EntropyParams params;
  UpdateRule rule;
};

/// Moves parameter points onto their exact classical specializations; the
/// GEG rules at the Shannon point become EGU.
inline ClassicalDispatch recover_classical(const EntropyParams& params, const UpdateRule& rule) {
  ClassicalDispatch d{canonicalize(params), rule};
  if (d.params.tag() == FamilyTag::shannon &&
      (rule.kind == RuleKind::geg_product || rule.kind == RuleKind::geg_simplified_q)) {
    d.rule.kind = RuleKind::egu;
  }
  return d;
}

inline double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Iterates the selected rule until the gradient sup-norm drops to grad_tol,
/// max_iters is reached, or the loss stops being finite.
inline RunTrace run(const Problem& problem, const EntropyParams& params, const UpdateRule& rule,
                    const OptimizerConfig& config, const WeightVector& w0) {
  if (!(config.eta > 0.0)) throw error(errc::config, "eta must be positive");
  if (!(config.weight_floor > 0.0 && config.weight_floor <= 1e-6)) throw error(errc::config, "weight_floor must lie in (0, 1e-6]");
  if (config.max_iters < 0) throw error(errc::config, "max_iters must be nonnegative");
  require_same_size(w0.size(), problem.dimension, "run");
  const bool simplex = rule.projection == Projection::simplex_normalize;
  if (simplex && !w0.on_simplex()) throw error(errc::constraint, "simplex projection needs a simplex start");
  if (problem.domain == Domain::unit_simplex && !simplex)
    throw error(errc::constraint, "problem " + problem.name + " lives on the simplex; use simplex_normalize");

  const auto dispatch = recover_classical(params, rule);
  RunTrace trace;
  WeightVector w = w0;
  std::size_t clipped = 0, floored = 0;
  double step_seconds = 0.0;

  for (int it = 0;; ++it) {
    const double loss = problem.loss(w.values());
    const auto grad = problem.gradient(w.values());
    const double gnorm = sup_norm(simplex ? normalized_gradient(w, grad) : grad);
    const auto [mn, mx] = std::minmax_element(w.values().begin(), w.values().end());
    trace.records.push_back({it, loss, gnorm, *mn, *mx, clipped, floored, step_seconds, w.values()});

    if (!std::isfinite(loss) || !std::isfinite(gnorm)) {
      trace.termination = Termination::diverged;
      break;
    }
    if (gnorm <= config.grad_tol) {
      trace.termination = Termination::converged;
      break;
    }
    if (it >= config.max_iters) {
      trace.termination = Termination::max_iters;
      break;
    }

    const double eta = config.schedule == Schedule::constant ? config.eta : config.eta / std::sqrt(it + 1.0);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      ProjectedStep s = simplex ? normalized_step(dispatch.params, w, grad, eta, dispatch.rule, config.weight_floor)
                                : project_orthant(apply_rule(dispatch.params, dispatch.rule.kind, w, grad, eta),
                                                  rule.projection, config.weight_floor);
      w = std::move(s.weights);
      clipped = s.clipped;
      floored = s.floored;
    } catch (const error& e) {
      throw error(e.code(), "iteration " + std::to_string(it + 1) + ": " + e.detail());
    }
    step_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return trace;
}

}  // namespace dmd
