#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "dmd/error.hpp"
#include "dmd/format.hpp"

namespace dmd {

/// Width of the band around a classical parameter point (q = 1, kappa = 0,
/// r = 0, ...) inside which the exact classical formula is used.
inline constexpr double kClassicalBand = 1e-12;

struct Shannon {
  bool operator==(const Shannon&) const = default;
};
struct Tsallis {
  double q;
  bool operator==(const Tsallis&) const = default;
};
struct Kaniadakis {
  double kappa;
  bool operator==(const Kaniadakis&) const = default;
};
struct SchwammleTsallis {
  double q;
  double q_prime;
  bool operator==(const SchwammleTsallis&) const = default;
};
struct Corcino {
  double q;
  double q_prime;
  double r;
  bool operator==(const Corcino&) const = default;
};
/// Kaniadakis-Lissia-Scarfone two-parameter logarithm x^r (x^k - x^-k) / 2k.
struct Kls {
  double kappa;
  double r;
  bool operator==(const Kls&) const = default;
};
/// (x^a - x^b) / (a - b).
struct Euler {
  double a;
  double b;
  bool operator==(const Euler&) const = default;
};

using Family = std::variant<Shannon, Tsallis, Kaniadakis, SchwammleTsallis, Corcino, Kls, Euler>;

enum class FamilyTag { shannon, tsallis, kaniadakis, schwammle_tsallis, corcino, kls, euler };

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

/// Which deformed logarithm is active, plus its hyperparameters. Immutable.
class EntropyParams {
 public:
  EntropyParams() : family_(Shannon{}) {}
  explicit EntropyParams(Family family) : family_(family) {}

  static EntropyParams shannon() { return EntropyParams(Shannon{}); }
  static EntropyParams tsallis(double q) { return EntropyParams(Tsallis{q}); }
  static EntropyParams kaniadakis(double kappa) { return EntropyParams(Kaniadakis{kappa}); }
  static EntropyParams schwammle_tsallis(double q, double q_prime) {
    return EntropyParams(SchwammleTsallis{q, q_prime});
  }
  static EntropyParams corcino(double q, double q_prime, double r) {
    return EntropyParams(Corcino{q, q_prime, r});
  }
  static EntropyParams kls(double kappa, double r) { return EntropyParams(Kls{kappa, r}); }
  /// KLS with r = omega * kappa; stored as (kappa, r).
  static EntropyParams kls_omega(double kappa, double omega) {
    return EntropyParams(Kls{kappa, omega * kappa});
  }
  static EntropyParams euler(double a, double b) { return EntropyParams(Euler{a, b}); }

  const Family& family() const noexcept { return family_; }
  FamilyTag tag() const noexcept { return static_cast<FamilyTag>(family_.index()); }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&family_);
  }

  bool operator==(const EntropyParams&) const = default;

 private:
  Family family_;
};

inline const char* family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::shannon: return "shannon";
    case FamilyTag::tsallis: return "tsallis";
    case FamilyTag::kaniadakis: return "kaniadakis";
    case FamilyTag::schwammle_tsallis: return "schwammle_tsallis";
    case FamilyTag::corcino: return "corcino";
    case FamilyTag::kls: return "kls";
    case FamilyTag::euler: return "euler";
  }
  return "unknown";
}

namespace detail {
inline bool near(double a, double b) { return std::abs(a - b) < kClassicalBand; }
}  // namespace detail

/// Maps parameter points that coincide with a simpler family onto that family
/// (q = 1 -> Shannon, kappa = 0 -> Shannon, KLS r = 0 -> Kaniadakis,
/// KLS r = +-|kappa| -> Tsallis q = 1 - 2r, ST q' = 1 -> Tsallis q, ...).
/// Interior points are returned unchanged.
inline EntropyParams canonicalize(const EntropyParams& params) {
  using detail::near;
  return std::visit(
      overloaded{
          [](const Shannon&) { return EntropyParams::shannon(); },
          [](const Tsallis& p) {
            return near(p.q, 1.0) ? EntropyParams::shannon() : EntropyParams::tsallis(p.q);
          },
          [](const Kaniadakis& p) {
            return near(p.kappa, 0.0) ? EntropyParams::shannon() : EntropyParams::kaniadakis(p.kappa);
          },
          [](const SchwammleTsallis& p) {
            if (near(p.q_prime, 1.0)) return canonicalize(EntropyParams::tsallis(p.q));
            if (near(p.q, 1.0)) return canonicalize(EntropyParams::tsallis(p.q_prime));
            return EntropyParams::schwammle_tsallis(p.q, p.q_prime);
          },
          [](const Corcino& p) {
            // log_CC = log^T_r(exp(log^T_q'(exp(log^T_q(x))))).
            if (near(p.r, 1.0)) return canonicalize(EntropyParams::schwammle_tsallis(p.q, p.q_prime));
            if (near(p.q_prime, 1.0)) return canonicalize(EntropyParams::schwammle_tsallis(p.q, p.r));
            if (near(p.q, 1.0)) return canonicalize(EntropyParams::schwammle_tsallis(p.q_prime, p.r));
            return EntropyParams::corcino(p.q, p.q_prime, p.r);
          },
          [](const Kls& p) {
            if (near(p.r, 0.0)) return canonicalize(EntropyParams::kaniadakis(p.kappa));
            if (near(std::abs(p.r), std::abs(p.kappa))) return canonicalize(EntropyParams::tsallis(1.0 - 2.0 * p.r));
            return EntropyParams::kls(p.kappa, p.r);
          },
          [](const Euler& p) {
            if (near(p.b, 0.0)) return canonicalize(EntropyParams::tsallis(1.0 - p.a));
            if (near(p.a, 0.0)) return canonicalize(EntropyParams::tsallis(1.0 - p.b));
            if (near(p.a + p.b, 0.0)) return canonicalize(EntropyParams::kaniadakis(0.5 * (p.a - p.b)));
            return EntropyParams::euler(p.a, p.b);
          },
      },
      params.family());
}

inline std::string describe(const EntropyParams& params) {
  auto num = [](double v) { return format_double(v); };
  return std::visit(
      overloaded{
          [](const Shannon&) { return std::string("shannon"); },
          [&](const Tsallis& p) { return "tsallis(q=" + num(p.q) + ")"; },
          [&](const Kaniadakis& p) { return "kaniadakis(kappa=" + num(p.kappa) + ")"; },
          [&](const SchwammleTsallis& p) {
            return "schwammle_tsallis(q=" + num(p.q) + ",q_prime=" + num(p.q_prime) + ")";
          },
          [&](const Corcino& p) {
            return "corcino(q=" + num(p.q) + ",q_prime=" + num(p.q_prime) + ",r=" + num(p.r) + ")";
          },
          [&](const Kls& p) { return "kls(kappa=" + num(p.kappa) + ",r=" + num(p.r) + ")"; },
          [&](const Euler& p) { return "euler(a=" + num(p.a) + ",b=" + num(p.b) + ")"; },
      },
      params.family());
}

}  // namespace dmd
