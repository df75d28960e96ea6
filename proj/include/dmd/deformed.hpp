#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dmd/error.hpp"
#include "dmd/families.hpp"
#include "dmd/format.hpp"
#include "dmd/numerics.hpp"
#include "dmd/params.hpp"

namespace dmd {

struct ValidationReport {
  bool monotone_ok = true;
  bool concave_ok = true;
  std::vector<std::string> messages;
};

namespace detail {

inline bool all_finite(std::initializer_list<double> v) {
  for (double d : v)
    if (!std::isfinite(d)) return false;
  return true;
}

// Exact ranges of the two-power family (x^a - x^b)/(a - b):
// increasing iff a != b and a*b <= 0; strictly concave additionally needs
// max(a,b) <= 1, excluding the linear point {a,b} = {1,0}.
inline bool euler_monotone(double a, double b) { return a != b && a * b <= 0.0; }

inline bool euler_concave(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (!(hi >= 0.0 && hi <= 1.0 && lo <= 0.0)) return false;
  return !(hi == 1.0 && lo == 0.0);
}

inline bool corcino_concave_sampled(double q, double qp, double r) {
  // sign(d2log) = sign((1-r) dST(x) - q/x + (1-q') x^{-q}) since dlog > 0.
  for (int i = 0; i <= 160; ++i) {
    const double x = std::pow(10.0, -8.0 + 0.1 * i);
    const double s = (1.0 - r) * st_dlog(q, qp, x) - q / x + (1.0 - qp) * std::pow(x, -q);
    if (!(s < 0.0)) return false;
  }
  return true;
}

inline bool monotone_ok(const EntropyParams& p) {
  return std::visit(
      overloaded{
          [](const Shannon&) { return true; },
          [](const Tsallis& f) { return std::isfinite(f.q); },
          [](const Kaniadakis& f) { return std::abs(f.kappa) < 1.0; },
          [](const SchwammleTsallis& f) { return all_finite({f.q, f.q_prime}); },
          [](const Corcino& f) { return all_finite({f.q, f.q_prime, f.r}); },
          [](const Kls& f) { return std::abs(f.kappa) < 1.0 && std::abs(f.r) <= std::abs(f.kappa); },
          [](const Euler& f) { return all_finite({f.a, f.b}) && euler_monotone(f.a, f.b); },
      },
      p.family());
}

inline void require_monotone(const EntropyParams& p) {
  if (!monotone_ok(p)) throw error(errc::parameter, describe(p) + " is outside the monotone range");
}

inline void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw error(errc::domain, "x = " + format_double(x) + " must be positive and finite");
}

// Euler (a, b) is KLS with kappa = (a - b)/2, r = (a + b)/2.
inline Kls euler_as_kls(const Euler& e) { return {0.5 * (e.a - e.b), 0.5 * (e.a + e.b)}; }

template <class F, class DF>
ClipResult numeric_exp(F&& f, DF&& df, double y) {
  try {
    auto res = invert_monotone(f, df, y, 1.0);
    if (!res.converged) throw error(errc::non_convergence, "exp inversion for y = " + format_double(y));
    return {res.root, false};
  } catch (const error& e) {
    if (e.code() == errc::out_of_range_below) return {0.0, true};
    if (e.code() == errc::out_of_range_above) throw error(errc::overflow, "y = " + format_double(y) + " above the range of the logarithm");
    throw;
  }
}

}  // namespace detail

/// Range checks for monotonicity and strict concavity. Never throws.
inline ValidationReport validate(const EntropyParams& params) {
  ValidationReport rep;
  auto fail_mono = [&](std::string m) { rep.monotone_ok = false; rep.messages.push_back(std::move(m)); };
  auto fail_conc = [&](std::string m) { rep.concave_ok = false; rep.messages.push_back(std::move(m)); };
  std::visit(
      overloaded{
          [](const Shannon&) {},
          [&](const Tsallis& f) {
            if (!std::isfinite(f.q)) { fail_mono("q must be finite"); fail_conc("q must be finite"); return; }
            if (!(f.q > 0.0)) fail_conc("tsallis log is not strictly concave for q <= 0");
          },
          [&](const Kaniadakis& f) {
            if (!(std::abs(f.kappa) < 1.0)) {
              fail_mono("kappa must lie in (-1, 1)");
              fail_conc("kappa must lie in (-1, 1)");
            }
          },
          [&](const SchwammleTsallis& f) {
            if (!detail::all_finite({f.q, f.q_prime})) { fail_mono("q, q' must be finite"); fail_conc("q, q' must be finite"); return; }
            const bool conc = detail::near(f.q, 1.0) ? f.q_prime > 0.0 : (f.q > 0.0 && f.q_prime >= 1.0);
            if (!conc) fail_conc("schwammle-tsallis log is strictly concave only for q > 0, q' >= 1 (q = 1: q' > 0)");
          },
          [&](const Corcino& f) {
            if (!detail::all_finite({f.q, f.q_prime, f.r})) { fail_mono("q, q', r must be finite"); fail_conc("q, q', r must be finite"); return; }
            if (!detail::corcino_concave_sampled(f.q, f.q_prime, f.r)) fail_conc("corcino log has d2log >= 0 somewhere on [1e-8, 1e8]");
          },
          [&](const Kls& f) {
            const double k = std::abs(f.kappa);
            if (!(k < 1.0)) fail_mono("kls needs |kappa| < 1");
            if (!(std::abs(f.r) <= k)) fail_mono("kls needs -|kappa| <= r <= |kappa|");
            if (!rep.monotone_ok) { fail_conc("kls concavity needs the monotone range"); return; }
            if (k == 0.0) return;  // r = 0 too: the classical log
            if (!detail::euler_concave(f.r + k, f.r - k))
              fail_conc("kls strict concavity needs r <= 1/2 - |1/2 - |kappa||, excluding kappa = r = 1/2");
          },
          [&](const Euler& f) {
            if (!detail::all_finite({f.a, f.b}) || !detail::euler_monotone(f.a, f.b)) {
              fail_mono("euler log needs a != b and a*b <= 0");
              fail_conc("euler concavity needs the monotone range");
              return;
            }
            if (!detail::euler_concave(f.a, f.b)) fail_conc("euler strict concavity needs max(a,b) in [0,1], min(a,b) <= 0, (a,b) != (1,0)");
          },
      },
      params.family());
  return rep;
}

/// Deformed logarithm of x > 0.
inline double log_d(const EntropyParams& params, double x) {
  detail::require_positive(x);
  detail::require_monotone(params);
  if (x == 1.0) return 0.0;
  const EntropyParams p = canonicalize(params);
  return std::visit(
      overloaded{
          [&](const Shannon&) { return std::log(x); },
          [&](const Tsallis& f) { return detail::tsallis_log(f.q, x); },
          [&](const Kaniadakis& f) { return detail::kaniadakis_log(f.kappa, x); },
          [&](const SchwammleTsallis& f) { return detail::st_log(f.q, f.q_prime, x); },
          [&](const Corcino& f) { return detail::corcino_log(f.q, f.q_prime, f.r, x); },
          [&](const Kls& f) { return detail::kls_log(f.kappa, f.r, x); },
          [&](const Euler& f) { return detail::euler_log(f.a, f.b, x); },
      },
      p.family());
}

/// Inverse of log_d, with the [.]_+ clip status. Values below a bounded-below
/// range of the logarithm clip to 0; values above the range raise overflow.
inline ClipResult exp_d_checked(const EntropyParams& params, double y) {
  if (std::isnan(y)) throw error(errc::domain, "exp_d of NaN");
  detail::require_monotone(params);
  if (y == 0.0) return {1.0, false};
  const EntropyParams p = canonicalize(params);
  return std::visit(
      overloaded{
          [&](const Shannon&) { return ClipResult{detail::finite_or_overflow(std::exp(y), "exp overflow"), false}; },
          [&](const Tsallis& f) { return detail::tsallis_exp(f.q, y); },
          [&](const Kaniadakis& f) { return ClipResult{detail::kaniadakis_exp(f.kappa, y), false}; },
          [&](const SchwammleTsallis& f) { return detail::st_exp(f.q, f.q_prime, y); },
          [&](const Corcino& f) {
            return detail::numeric_exp([&](double x) { return detail::corcino_log(f.q, f.q_prime, f.r, x); },
                                       [&](double x) { return detail::corcino_dlog(f.q, f.q_prime, f.r, x); }, y);
          },
          [&](const Kls& f) {
            return detail::numeric_exp([&](double x) { return detail::kls_log(f.kappa, f.r, x); },
                                       [&](double x) { return detail::kls_dlog(f.kappa, f.r, x); }, y);
          },
          [&](const Euler& f) {
            const Kls k = detail::euler_as_kls(f);
            return detail::numeric_exp([&](double x) { return detail::kls_log(k.kappa, k.r, x); },
                                       [&](double x) { return detail::kls_dlog(k.kappa, k.r, x); }, y);
          },
      },
      p.family());
}

inline double exp_d(const EntropyParams& params, double y) { return exp_d_checked(params, y).value; }

/// First derivative of log_d; strictly positive in the monotone range.
inline double dlog_d(const EntropyParams& params, double x) {
  detail::require_positive(x);
  detail::require_monotone(params);
  const EntropyParams p = canonicalize(params);
  return std::visit(
      overloaded{
          [&](const Shannon&) { return 1.0 / x; },
          [&](const Tsallis& f) { return detail::tsallis_dlog(f.q, x); },
          [&](const Kaniadakis& f) { return detail::kaniadakis_dlog(f.kappa, x); },
          [&](const SchwammleTsallis& f) { return detail::st_dlog(f.q, f.q_prime, x); },
          [&](const Corcino& f) { return detail::corcino_dlog(f.q, f.q_prime, f.r, x); },
          [&](const Kls& f) { return detail::kls_dlog(f.kappa, f.r, x); },
          [&](const Euler& f) { return detail::euler_dlog(f.a, f.b, x); },
      },
      p.family());
}

inline double d2log_d(const EntropyParams& params, double x) {
  detail::require_positive(x);
  detail::require_monotone(params);
  const EntropyParams p = canonicalize(params);
  return std::visit(
      overloaded{
          [&](const Shannon&) { return -1.0 / (x * x); },
          [&](const Tsallis& f) { return detail::tsallis_d2log(f.q, x); },
          [&](const Kaniadakis& f) { return detail::kaniadakis_d2log(f.kappa, x); },
          [&](const SchwammleTsallis& f) { return detail::st_d2log(f.q, f.q_prime, x); },
          [&](const Corcino& f) { return detail::corcino_d2log(f.q, f.q_prime, f.r, x); },
          [&](const Kls& f) { return detail::kls_d2log(f.kappa, f.r, x); },
          [&](const Euler& f) { return detail::euler_d2log(f.a, f.b, x); },
      },
      p.family());
}

/// Dual parameters with log_d(params, 1/x) = -log_d(dual, x).
inline EntropyParams duality_conjugate(const EntropyParams& params) {
  return std::visit(
      overloaded{
          [](const Shannon&) { return EntropyParams::shannon(); },
          [](const Tsallis& f) { return EntropyParams::tsallis(2.0 - f.q); },
          [](const Kaniadakis& f) { return EntropyParams::kaniadakis(f.kappa); },
          [](const SchwammleTsallis& f) { return EntropyParams::schwammle_tsallis(2.0 - f.q, 2.0 - f.q_prime); },
          [&](const Corcino&) -> EntropyParams {
            throw error(errc::unsupported_family, "no dual stated for " + describe(params));
          },
          [](const Kls& f) { return EntropyParams::kls(f.kappa, -f.r); },
          [&](const Euler&) -> EntropyParams {
            throw error(errc::unsupported_family, "no dual stated for " + describe(params));
          },
      },
      params.family());
}

}  // namespace dmd
