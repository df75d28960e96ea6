#pragma once

#include <cmath>
#include <vector>

#include "dmd/deformed.hpp"
#include "dmd/numerics.hpp"
#include "dmd/weights.hpp"

namespace dmd {

/// Separable mirror map whose link is log_d componentwise. For families
/// without a closed F, F(w) = sum_i int_{reference_point}^{w_i} log_d(t) dt.
struct MirrorMap {
  EntropyParams params;
  double reference_point = 1.0;
};

/// F(w) = |w|^2 / 2, link = identity.
struct EuclideanMap {};

inline std::vector<double> link(const EuclideanMap&, const WeightVector& w) { return w.values(); }

inline std::vector<double> link(const MirrorMap& map, const WeightVector& w) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = log_d(map.params, w[i]);
  return out;
}

inline WeightVector link_inverse(const EuclideanMap&, const std::vector<double>& theta) {
  return WeightVector(theta);
}

inline WeightVector link_inverse(const MirrorMap& map, const std::vector<double>& theta) {
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] = exp_d(map.params, theta[i]);
  return WeightVector(std::move(out));
}

inline std::vector<double> link_derivative_reciprocal(const EuclideanMap&, const WeightVector& w) {
  return std::vector<double>(w.size(), 1.0);
}

/// 1 / dlog_d(w_i): the diagonal of the inverse Hessian of F.
inline std::vector<double> link_derivative_reciprocal(const MirrorMap& map, const WeightVector& w) {
  detail::require_monotone(map.params);
  const EntropyParams p = canonicalize(map.params);
  std::vector<double> out(w.size());
  const auto* st = p.get_if<SchwammleTsallis>();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (st) {
      // w^q exp((1-q')/(1-q) (1 - w^{1-q}))
      detail::require_positive(w[i]);
      const double s = 1.0 - st->q;
      out[i] = std::pow(w[i], st->q) * std::exp((1.0 - st->q_prime) / s * -std::expm1(s * std::log(w[i])));
    } else {
      out[i] = 1.0 / dlog_d(p, w[i]);
    }
  }
  return out;
}

inline double mirror_value(const EuclideanMap&, const WeightVector& w) {
  double s = 0.0;
  for (double v : w.values()) s += 0.5 * v * v;
  return s;
}

namespace detail {

// int_a^b (log_d(t) - c) dt, integrated in s = ln t so wide ranges stay smooth.
inline double integrate_link(const EntropyParams& p, double a, double b, double c) {
  if (a == b) return 0.0;
  return quadrature([&](double s) {
    const double t = std::exp(s);
    return (log_d(p, t) - c) * t;
  }, std::log(a), std::log(b));
}

}  // namespace detail

inline double mirror_value(const MirrorMap& map, const WeightVector& w) {
  detail::require_monotone(map.params);
  detail::require_positive(map.reference_point);
  const EntropyParams p = canonicalize(map.params);
  double total = 0.0;
  for (double v : w.values()) {
    detail::require_positive(v);
    total += std::visit(
        overloaded{
            [&](const Shannon&) { return v * std::log(v) - v; },
            [&](const Tsallis& f) { return v * detail::tsallis_log(f.q, v) - detail::tsallis_log(f.q - 1.0, v); },
            [&](const Kaniadakis& f) {
              const double k = f.kappa;
              return (std::pow(v, 1.0 + k) / (1.0 + k) - std::pow(v, 1.0 - k) / (1.0 - k)) / (2.0 * k);
            },
            [&](const auto&) { return detail::integrate_link(p, map.reference_point, v, 0.0); },
        },
        p.family());
  }
  return total;
}

inline double bregman(const EuclideanMap&, const WeightVector& w, const WeightVector& w_ref) {
  require_same_size(w.size(), w_ref.size(), "bregman");
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += 0.5 * (w[i] - w_ref[i]) * (w[i] - w_ref[i]);
  return s;
}

/// F(w) - F(w_ref) - (w - w_ref)^T link(w_ref), straight from mirror_value.
inline double bregman_definitional(const MirrorMap& map, const WeightVector& w, const WeightVector& w_ref) {
  require_same_size(w.size(), w_ref.size(), "bregman");
  const auto g = link(map, w_ref);
  double inner = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) inner += (w[i] - w_ref[i]) * g[i];
  return mirror_value(map, w) - mirror_value(map, w_ref) - inner;
}

/// Bregman divergence D_F(w || w_ref). Tsallis uses the beta divergence
/// (beta = 1 - q) with its KL (q = 1) and Itakura-Saito (q = 2) limits;
/// families without closed F integrate log_d(t) - log_d(w_ref) directly.
inline double bregman(const MirrorMap& map, const WeightVector& w, const WeightVector& w_ref) {
  require_same_size(w.size(), w_ref.size(), "bregman");
  detail::require_monotone(map.params);
  const EntropyParams p = canonicalize(map.params);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double a = w[i], b = w_ref[i];
    detail::require_positive(a);
    detail::require_positive(b);
    if (a == b) continue;
    total += std::visit(
        overloaded{
            [&](const Shannon&) { return a * std::log(a / b) - a + b; },
            [&](const Tsallis& f) {
              if (detail::near(f.q, 2.0)) return a / b - std::log(a / b) - 1.0;
              const double beta = 1.0 - f.q;
              return a * (std::pow(a, beta) - std::pow(b, beta)) / beta -
                     (std::pow(a, beta + 1.0) - std::pow(b, beta + 1.0)) / (beta + 1.0);
            },
            [&](const Kaniadakis&) {
              const MirrorMap m{p, map.reference_point};
              const WeightVector wa({a}), wb({b});
              return bregman_definitional(m, wa, wb);
            },
            [&](const auto&) { return detail::integrate_link(p, b, a, log_d(p, b)); },
        },
        p.family());
  }
  return total;
}

}  // namespace dmd
