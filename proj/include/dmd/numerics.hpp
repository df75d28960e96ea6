#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dmd/error.hpp"
#include "dmd/families.hpp"
#include "dmd/format.hpp"

namespace dmd {

struct RootFindResult {
  double root = 0.0;
  double residual = 0.0;  // f(root) - target
  int iterations = 0;
  bool converged = false;
};

struct RootFindOptions {
  double rel_tol = 1e-12;  // |f(x) - y| <= rel_tol * max(1, |y|)
  int max_expansions = 200;
  int max_iterations = 200;
};

namespace detail {

struct NoDerivative {};

// Safeguarded Newton/bisection on a bracket with g(lo) < 0 < g(hi), where
// g(x) = f(x) - target is increasing. Newton (or false position when no
// derivative is supplied) is accepted only if it stays strictly inside the
// bracket and the residual keeps shrinking; otherwise the bracket is halved
// (geometrically when `geometric` and the bracket spans a wide ratio).
template <class G, class DG>
RootFindResult safeguarded_solve(G&& g, DG&& dg, double lo, double hi, double glo, double ghi,
                                 double tol, int max_iterations, bool geometric) {
  constexpr bool has_derivative = !std::is_same_v<std::decay_t<DG>, NoDerivative>;
  RootFindResult best;
  best.root = std::abs(glo) < std::abs(ghi) ? lo : hi;
  best.residual = std::abs(glo) < std::abs(ghi) ? glo : ghi;

  double x = best.root;
  double gx = best.residual;
  double prev_abs = std::numeric_limits<double>::infinity();
  bool force_bisect = false;

  for (int it = 1; it <= max_iterations; ++it) {
    double candidate = std::numeric_limits<double>::quiet_NaN();
    if (!force_bisect) {
      if constexpr (has_derivative) {
        const double d = dg(x);
        if (std::isfinite(d) && d > 0.0) candidate = x - gx / d;
      } else {
        if (std::isfinite(glo) && std::isfinite(ghi) && ghi > glo)
          candidate = lo - glo * (hi - lo) / (ghi - glo);
      }
    }
    if (!(candidate > lo && candidate < hi)) {
      if (geometric && lo > 0.0 && hi / lo > 4.0)
        candidate = std::sqrt(lo) * std::sqrt(hi);
      else
        candidate = lo + 0.5 * (hi - lo);
    }
    x = candidate;
    gx = g(x);
    best.iterations = it;
    if (std::abs(gx) < std::abs(best.residual) || std::isnan(best.residual)) {
      best.root = x;
      best.residual = gx;
    }
    if (std::abs(gx) <= tol) {
      best.root = x;
      best.residual = gx;
      best.converged = true;
      return best;
    }
    if (std::isnan(gx)) break;
    if (gx < 0.0) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
      ghi = gx;
    }
    force_bisect = !(std::abs(gx) < 0.5 * prev_abs);
    prev_abs = std::abs(gx);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;
  }
  best.converged = std::abs(best.residual) <= tol;
  return best;
}

template <class F, class DF>
RootFindResult invert_monotone_impl(F&& f, DF&& df, double y, double seed, const RootFindOptions& opt) {
  if (!(seed > 0.0) || !std::isfinite(seed)) throw error(errc::domain, "invert_monotone seed must be positive");
  if (!std::isfinite(y)) throw error(errc::domain, "invert_monotone target must be finite");
  const double tol = opt.rel_tol * std::max(1.0, std::abs(y));
  auto g = [&](double x) { return f(x) - y; };

  double g0 = g(seed);
  if (std::abs(g0) <= tol) return {seed, g0, 0, true};

  double lo = seed, hi = seed, glo = g0, ghi = g0;
  if (g0 < 0.0) {
    int k = 0;
    for (; k < opt.max_expansions && ghi < 0.0; ++k) {
      lo = hi;
      glo = ghi;
      hi *= 2.0;
      ghi = g(hi);
      if (!std::isfinite(hi)) break;
    }
    if (!(ghi >= 0.0))
      throw error(errc::out_of_range_above, "target " + format_double(y) + " above the range of the map");
  } else {
    int k = 0;
    for (; k < opt.max_expansions && glo > 0.0; ++k) {
      hi = lo;
      ghi = glo;
      lo *= 0.5;
      glo = g(lo);
      if (lo == 0.0) break;
    }
    if (!(glo <= 0.0) || lo == 0.0)
      throw error(errc::out_of_range_below, "target " + format_double(y) + " below the range of the map");
  }
  if (std::abs(glo) <= tol) return {lo, glo, 0, true};
  if (std::abs(ghi) <= tol) return {hi, ghi, 0, true};

  if constexpr (std::is_same_v<std::decay_t<DF>, NoDerivative>) {
    return safeguarded_solve(g, NoDerivative{}, lo, hi, glo, ghi, tol, opt.max_iterations, true);
  } else {
    return safeguarded_solve(g, df, lo, hi, glo, ghi, tol, opt.max_iterations, true);
  }
}

}  // namespace detail

/// Solves f(x) = y for a strictly increasing continuous f on (0, inf).
/// Brackets by doubling/halving from `seed`, then refines with safeguarded
/// Newton steps using the supplied derivative `df`.
/// Throws out_of_range_below / out_of_range_above when y is not bracketed.
template <class F, class DF>
RootFindResult invert_monotone(F&& f, DF&& df, double y, double seed = 1.0, const RootFindOptions& opt = {}) {
  return detail::invert_monotone_impl(std::forward<F>(f), std::forward<DF>(df), y, seed, opt);
}

/// Derivative-free variant (false position with bisection safeguard).
template <class F>
RootFindResult invert_monotone(F&& f, double y, double seed = 1.0, const RootFindOptions& opt = {}) {
  return detail::invert_monotone_impl(std::forward<F>(f), detail::NoDerivative{}, y, seed, opt);
}

/// Principal branch of the Lambert-Tsallis function: the W >= -1/(2-q)
/// solving W [1 + (1-q) W]_+^{1/(1-q)} = z. For q = 1 this is Lambert W0.
inline RootFindResult lambert_tsallis_w(double q, double z) {
  if (!std::isfinite(q) || !std::isfinite(z)) throw error(errc::domain, "lambert_tsallis_w needs finite q, z");
  auto eq = [q](double w) { return detail::tsallis_exp(q, w).value; };
  auto g = [&](double w) { return w * eq(w) - z; };
  // d/dW [W exp_q(W)] = exp_q(W)^q (1 + (2-q) W)
  auto dg = [&](double w) {
    const double e = eq(w);
    return std::pow(e, q) * (1.0 + (2.0 - q) * w);
  };
  const double tol = 1e-12 * std::max(1.0, std::abs(z));

  double lo, glo;
  if (q < 2.0) {
    lo = -1.0 / (2.0 - q);
    glo = g(lo);
    if (glo > tol) {
      throw error(errc::out_of_range_below,
                  "z = " + format_double(z) + " below the branch point value " + format_double(glo + z));
    }
    if (std::abs(glo) <= tol) return {lo, glo, 0, true};
  } else {
    lo = -1.0;
    glo = g(lo);
    for (int k = 0; k < 200 && glo > 0.0; ++k) {
      lo *= 2.0;
      glo = g(lo);
    }
    if (glo > 0.0) throw error(errc::out_of_range_below, "z below the range of W exp_q(W)");
  }

  double hi, ghi;
  const double base = std::max(lo, 0.0);
  if (q <= 1.0 || std::abs(q - 1.0) < kClassicalBand) {
    hi = std::max(1.0, base);
    ghi = g(hi);
    for (int k = 0; k < 200 && ghi < 0.0; ++k) {
      hi *= 2.0;
      ghi = g(hi);
    }
  } else {
    const double wmax = 1.0 / (q - 1.0);
    double gap = wmax - base;
    hi = base + 0.5 * gap;
    ghi = g(hi);
    for (int k = 0; k < 1000 && ghi < 0.0; ++k) {
      gap *= 0.5;
      hi = wmax - gap;
      ghi = g(hi);
    }
  }
  if (!(ghi >= 0.0)) throw error(errc::out_of_range_above, "z above the range of W exp_q(W)");
  if (std::abs(ghi) <= tol) return {hi, ghi, 0, true};

  auto r = detail::safeguarded_solve(g, dg, lo, hi, glo, ghi, tol, 200, false);
  r.converged = std::abs(r.residual) <= 1e-10 * std::max(1.0, std::abs(z));
  return r;
}

/// Central finite difference. order 1: h = 1e-6 max(1,|x|); order 2: h = 1e-4 max(1,|x|).
template <class F>
double finite_diff(F&& f, double x, int order = 1) {
  if (order == 1) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
  }
  if (order == 2) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
  }
  throw error(errc::domain, "finite_diff order must be 1 or 2");
}

/// Adaptive 15-point Gauss-Kronrod integral of f over [a, b]. Throws
/// non_convergence when the error estimate exceeds `abs_tol`.
template <class F>
double quadrature(F&& f, double a, double b, double abs_tol = 1e-10) {
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto g = [&](double t) { return f(t); };
  double err = 0.0;
  double l1 = 0.0;
  // A relative target far below the rounding floor makes the summed error
  // estimates grow, so start at 1e-12 and tighten only if needed.
  double value = GK::integrate(g, a, b, 15, 1e-12, &err, &l1);
  if (std::isfinite(value) && err > abs_tol && l1 > 0.0) {
    double err2 = 0.0;
    const double v2 = GK::integrate(g, a, b, 20, std::max(abs_tol / (4.0 * l1), 1e-15), &err2, &l1);
    if (err2 < err) {
      value = v2;
      err = err2;
    }
  }
  if (!std::isfinite(value) || !(err <= abs_tol)) {
    throw error(errc::non_convergence, "quadrature error estimate " + format_double(err) + " over [" +
                                           format_double(a) + ", " + format_double(b) + "]");
  }
  return value;
}

// ---- Truncated series (cross-checks only; never used on the optimizer path) --

/// ln x + (1-q)/2 ln^2 x + (1-q)^2/6 ln^3 x
inline double series_log_q(double q, double x) {
  const double l = std::log(x);
  const double s = 1.0 - q;
  return l + 0.5 * s * l * l + s * s * l * l * l / 6.0;
}

/// 1 + x + q/2 x^2 + (2q^2 - q)/6 x^3
inline double series_exp_q(double q, double x) {
  return 1.0 + x + 0.5 * q * x * x + (2.0 * q * q - q) * x * x * x / 6.0;
}

/// ln x + k^2/3! ln^3 x + k^4/5! ln^5 x + k^6/7! ln^7 x
inline double series_log_kappa(double kappa, double x) {
  const double l = std::log(x);
  const double k2 = kappa * kappa;
  const double l2 = l * l;
  return l * (1.0 + l2 * (k2 / 6.0 + l2 * (k2 * k2 / 120.0 + l2 * k2 * k2 * k2 / 5040.0)));
}

/// 1 + x + x^2/2 + (1-k^2) x^3/6 + (1-4k^2) x^4/24
inline double series_exp_kappa(double kappa, double x) {
  const double k2 = kappa * kappa;
  return 1.0 + x + x * x / 2.0 + (1.0 - k2) * x * x * x / 6.0 + (1.0 - 4.0 * k2) * x * x * x * x / 24.0;
}

/// ln x + r ln^2 x + (k^2 + 3r^2)/6 ln^3 x
inline double series_log_kls(double kappa, double r, double x) {
  const double l = std::log(x);
  return l + r * l * l + (kappa * kappa + 3.0 * r * r) * l * l * l / 6.0;
}

/// 1 + x + (1-2r)/2 x^2 + (1/6 - r + 3r^2/2 - k^2/6) x^3
inline double series_exp_kls(double kappa, double r, double x) {
  return 1.0 + x + 0.5 * (1.0 - 2.0 * r) * x * x +
         (1.0 / 6.0 - r + 1.5 * r * r - kappa * kappa / 6.0) * x * x * x;
}

// ---- Numeric deformed exponentials ----------------------------------------

/// Inverse of log_{kappa,r} by root finding (no closed-form shortcuts).
/// Requires |kappa| < 1 and |r| <= |kappa|.
inline double exp_kls_numeric(double kappa, double r, double y) {
  if (!(std::abs(kappa) < 1.0) || !(std::abs(r) <= std::abs(kappa)))
    throw error(errc::parameter, "kls exp needs |kappa| < 1 and |r| <= |kappa|");
  auto res = invert_monotone([&](double x) { return detail::kls_log(kappa, r, x); },
                             [&](double x) { return detail::kls_dlog(kappa, r, x); }, y, 1.0);
  if (!res.converged) throw error(errc::non_convergence, "kls exp root finding did not converge");
  return res.root;
}

/// exp_{kappa,r} through the Lambert-Tsallis function:
/// (W_{(l+1)/l}(l (2 kappa y)^{-l}) / l)^{-1/(2 kappa)}, l = 2 kappa / (r + kappa).
/// Only defined for y > 0 and r > -|kappa|; kept as a cross-check.
inline double exp_kls_lambert(double kappa, double r, double y) {
  const double k = std::abs(kappa);
  if (!(k > 0.0) || !(r > -k) || !(r <= k)) throw error(errc::parameter, "lambert route needs 0 < |kappa|, -|kappa| < r <= |kappa|");
  if (!(y > 0.0)) throw error(errc::domain, "lambert route needs y > 0");
  const double lambda = 2.0 * k / (r + k);
  const double z = lambda * std::pow(2.0 * k * y, -lambda);
  const auto w = lambert_tsallis_w((lambda + 1.0) / lambda, z);
  if (!w.converged) throw error(errc::non_convergence, "lambert-tsallis did not converge");
  return std::pow(w.root / lambda, -1.0 / (2.0 * k));
}

/// Inverse of the Corcino (q, q', r) logarithm by root finding.
inline double exp_cc_numeric(double q, double qp, double r, double y) {
  auto res = invert_monotone([&](double x) { return detail::corcino_log(q, qp, r, x); },
                             [&](double x) { return detail::corcino_dlog(q, qp, r, x); }, y, 1.0);
  if (!res.converged) throw error(errc::non_convergence, "corcino exp root finding did not converge");
  return res.root;
}

}  // namespace dmd
