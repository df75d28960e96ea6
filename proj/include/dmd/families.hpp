#pragma once

// Closed-form scalar kernels for each deformed-logarithm family. No parameter
// validation happens here; callers in deformed.hpp dispatch and validate.

#include <cmath>
#include <limits>

#include "dmd/error.hpp"
#include "dmd/params.hpp"

namespace dmd {

/// A deformed-exponential value together with the [.]_+ clip status.
struct ClipResult {
  double value = 0.0;
  bool clipped = false;
};

namespace detail {

inline double finite_or_overflow(double v, const char* what) {
  if (!std::isfinite(v)) throw error(errc::overflow, what);
  return v;
}

// ---- Tsallis ---------------------------------------------------------------

inline double tsallis_log(double q, double x) {
  const double s = 1.0 - q;
  const double l = std::log(x);
  if (std::abs(s) < kClassicalBand) return l;
  return std::expm1(s * l) / s;
}

inline double tsallis_dlog(double q, double x) { return std::pow(x, -q); }

inline double tsallis_d2log(double q, double x) { return -q * std::pow(x, -q - 1.0); }

/// [1 + (1-q) y]_+^{1/(1-q)}. Non-positive bracket: 0 (clipped) when the
/// exponent is positive, a pole (overflow) when it is negative.
inline ClipResult tsallis_exp(double q, double y) {
  const double s = 1.0 - q;
  if (std::abs(s) < kClassicalBand) return {finite_or_overflow(std::exp(y), "exp overflow"), false};
  if (1.0 + s * y <= 0.0) {
    if (s > 0.0) return {0.0, true};
    throw error(errc::overflow, "tsallis exp pole: 1 + (1-q) y <= 0 with q > 1");
  }
  return {finite_or_overflow(std::exp(std::log1p(s * y) / s), "tsallis exp overflow"), false};
}

// ---- Kaniadakis ------------------------------------------------------------

inline double kaniadakis_log(double kappa, double x) {
  const double l = std::log(x);
  if (std::abs(kappa) < kClassicalBand) return l;
  return std::sinh(kappa * l) / kappa;
}

inline double kaniadakis_dlog(double kappa, double x) {
  return std::cosh(kappa * std::log(x)) / x;
}

inline double kaniadakis_d2log(double kappa, double x) {
  const double l = std::log(x);
  return (kappa * std::sinh(kappa * l) - std::cosh(kappa * l)) / (x * x);
}

/// exp(arsinh(kappa y) / kappa); the arsinh form stays accurate for large |y|.
inline double kaniadakis_exp(double kappa, double y) {
  if (std::abs(kappa) < kClassicalBand) return finite_or_overflow(std::exp(y), "exp overflow");
  return finite_or_overflow(std::exp(std::asinh(kappa * y) / kappa), "kaniadakis exp overflow");
}

// ---- Kaniadakis-Lissia-Scarfone (kappa, r) ---------------------------------

// sinh(kappa l) / kappa with the kappa -> 0 limit l.
inline double sinhc_scaled(double kappa, double l) {
  if (std::abs(kappa) < kClassicalBand) return l;
  return std::sinh(kappa * l) / kappa;
}

inline double kls_log(double kappa, double r, double x) {
  const double l = std::log(x);
  return std::exp(r * l) * sinhc_scaled(kappa, l);
}

// x^{r-1} [r S + C] == ((r+k) x^{r+k-1} - (r-k) x^{r-k-1}) / 2k
inline double kls_dlog(double kappa, double r, double x) {
  const double l = std::log(x);
  return std::exp((r - 1.0) * l) * (r * sinhc_scaled(kappa, l) + std::cosh(kappa * l));
}

inline double kls_d2log(double kappa, double r, double x) {
  const double l = std::log(x);
  const double s = sinhc_scaled(kappa, l);
  const double c = std::cosh(kappa * l);
  return std::exp((r - 2.0) * l) * ((r * (r - 1.0) + kappa * kappa) * s + (2.0 * r - 1.0) * c);
}

// ---- Euler (a, b) ----------------------------------------------------------

inline double euler_log(double a, double b, double x) {
  const double l = std::log(x);
  return std::exp(b * l) * std::expm1((a - b) * l) / (a - b);
}

inline double euler_dlog(double a, double b, double x) {
  return (a * std::pow(x, a - 1.0) - b * std::pow(x, b - 1.0)) / (a - b);
}

inline double euler_d2log(double a, double b, double x) {
  return (a * (a - 1.0) * std::pow(x, a - 2.0) - b * (b - 1.0) * std::pow(x, b - 2.0)) / (a - b);
}

// ---- Schwammle-Tsallis (q, q') = log^T_q'(exp(log^T_q(x))) ---------------

inline double st_log(double q, double qp, double x) {
  const double lq = tsallis_log(q, x);
  const double s = 1.0 - qp;
  if (std::abs(s) < kClassicalBand) return lq;
  return std::expm1(s * lq) / s;
}

inline double st_dlog(double q, double qp, double x) {
  return std::pow(x, -q) * std::exp((1.0 - qp) * tsallis_log(q, x));
}

inline double st_d2log(double q, double qp, double x) {
  return st_dlog(q, qp, x) * (-q / x + (1.0 - qp) * std::pow(x, -q));
}

/// [1 + (1-q)/(1-q') ln(1 + (1-q') y)]^{1/(1-q)}, evaluated as
/// exp^T_q(ln exp^T_q'(y)).
inline ClipResult st_exp(double q, double qp, double y) {
  const double s = 1.0 - qp;
  double u = y;
  if (std::abs(s) >= kClassicalBand) {
    if (1.0 + s * y <= 0.0) {
      if (s > 0.0) return {0.0, true};
      throw error(errc::overflow, "schwammle-tsallis exp pole");
    }
    u = std::log1p(s * y) / s;
  }
  return tsallis_exp(q, u);
}

// ---- Corcino (q, q', r) = log^T_r(exp(log_ST(x))) --------------------------

inline double corcino_log(double q, double qp, double r, double x) {
  const double lst = st_log(q, qp, x);
  const double s = 1.0 - r;
  if (std::abs(s) < kClassicalBand) return lst;
  return std::expm1(s * lst) / s;
}

inline double corcino_dlog(double q, double qp, double r, double x) {
  return std::exp((1.0 - r) * st_log(q, qp, x)) * st_dlog(q, qp, x);
}

inline double corcino_d2log(double q, double qp, double r, double x) {
  const double dst = st_dlog(q, qp, x);
  return corcino_dlog(q, qp, r, x) * ((1.0 - r) * dst - q / x + (1.0 - qp) * std::pow(x, -q));
}

}  // namespace detail
}  // namespace dmd
