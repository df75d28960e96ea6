#pragma once

// q-algebra and kappa-algebra, plus the generic product
// x (*)_D y = exp_D(log_D x + log_D y).

#include <cmath>
#include <limits>

#include "dmd/deformed.hpp"

namespace dmd {

inline double q_sum(double q, double x, double y) { return x + y + (1.0 - q) * x * y; }

inline double q_sub(double q, double x, double y) {
  const double den = 1.0 + (1.0 - q) * y;
  if (std::abs(den) <= 4.0 * std::numeric_limits<double>::epsilon())
    throw error(errc::singularity, "q_sub at y = -1/(1-q)");
  return (x - y) / den;
}

namespace detail {
// [bracket]_+^{1/(1-q)} with the same clip/pole rule as exp_q.
inline ClipResult q_power_bracket(double s, double bracket) {
  if (bracket <= 0.0) {
    if (s > 0.0) return {0.0, true};
    throw error(errc::overflow, "q-product pole: bracket <= 0 with q > 1");
  }
  return {finite_or_overflow(std::exp(std::log(bracket) / s), "q-product overflow"), false};
}

inline void require_positive_pair(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw error(errc::domain, "deformed product needs x, y > 0");
}
}  // namespace detail

/// [x^{1-q} + y^{1-q} - 1]_+^{1/(1-q)}
inline ClipResult q_prod_checked(double q, double x, double y) {
  detail::require_positive_pair(x, y);
  const double s = 1.0 - q;
  if (std::abs(s) < kClassicalBand) return {x * y, false};
  if (x == 1.0) return {y, false};
  if (y == 1.0) return {x, false};
  return detail::q_power_bracket(s, std::pow(x, s) + std::pow(y, s) - 1.0);
}

inline double q_prod(double q, double x, double y) { return q_prod_checked(q, x, y).value; }

/// [x^{1-q} - y^{1-q} + 1]_+^{1/(1-q)}
inline ClipResult q_div_checked(double q, double x, double y) {
  detail::require_positive_pair(x, y);
  const double s = 1.0 - q;
  if (std::abs(s) < kClassicalBand) return {x / y, false};
  if (x == y) return {1.0, false};
  if (y == 1.0) return {x, false};
  return detail::q_power_bracket(s, std::pow(x, s) - std::pow(y, s) + 1.0);
}

inline double q_div(double q, double x, double y) { return q_div_checked(q, x, y).value; }

inline double kappa_sum(double kappa, double x, double y) {
  const double k2 = kappa * kappa;
  return x * std::sqrt(1.0 + k2 * y * y) + y * std::sqrt(1.0 + k2 * x * x);
}

inline double kappa_sub(double kappa, double x, double y) {
  const double k2 = kappa * kappa;
  return x * std::sqrt(1.0 + k2 * y * y) - y * std::sqrt(1.0 + k2 * x * x);
}

/// exp_k(log_k x + log_k y); kappa = 0 is the ordinary product.
inline double kappa_prod(double kappa, double x, double y) {
  detail::require_positive_pair(x, y);
  if (std::abs(kappa) < kClassicalBand) return x * y;
  if (x == 1.0) return y;
  if (y == 1.0) return x;
  return detail::kaniadakis_exp(kappa, detail::kaniadakis_log(kappa, x) + detail::kaniadakis_log(kappa, y));
}

/// exp((1/k) arsinh((x^k - x^-k + y^k - y^-k)/2)); equal to kappa_prod.
inline double kappa_prod_closed(double kappa, double x, double y) {
  detail::require_positive_pair(x, y);
  if (std::abs(kappa) < kClassicalBand) return x * y;
  const double u = std::pow(x, kappa) - std::pow(x, -kappa) + std::pow(y, kappa) - std::pow(y, -kappa);
  return detail::finite_or_overflow(std::exp(std::asinh(0.5 * u) / kappa), "kappa-product overflow");
}

inline double kappa_div(double kappa, double x, double y) {
  detail::require_positive_pair(x, y);
  if (std::abs(kappa) < kClassicalBand) return x / y;
  if (x == y) return 1.0;
  return kappa_prod(kappa, x, 1.0 / y);
}

/// Generic deformed product. Tsallis and Kaniadakis use their closed products.
inline ClipResult d_prod_checked(const EntropyParams& params, double x, double y) {
  detail::require_positive_pair(x, y);
  detail::require_monotone(params);
  const EntropyParams p = canonicalize(params);
  if (p.tag() == FamilyTag::shannon) return {x * y, false};
  if (const auto* t = p.get_if<Tsallis>()) return q_prod_checked(t->q, x, y);
  if (const auto* k = p.get_if<Kaniadakis>()) return {kappa_prod(k->kappa, x, y), false};
  if (y == 1.0) return {x, false};
  if (x == 1.0) return {y, false};
  return exp_d_checked(p, log_d(p, x) + log_d(p, y));
}

inline double d_prod(const EntropyParams& params, double x, double y) {
  return d_prod_checked(params, x, y).value;
}

}  // namespace dmd
