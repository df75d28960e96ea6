#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dmd/deformed.hpp"

using namespace dmd;

namespace {

// mpmath, 30 digits (tests/oracles/compute_oracles.py).
constexpr double kLogQHalf2 = 0.8284271247461900976;
constexpr double kLogKappaHalf2 = 0.70710678118654752440;
constexpr double kExpKappaHalf1 = 2.6180339887498948482;
constexpr double kLogKls2 = 0.81225239635623552261;  // kappa=0.5, r=0.2, x=2
constexpr double kExpKls1 = 2.2806043918081745337;   // kappa=0.5, r=0.2, y=1
constexpr double kExpKlsNeg = 0.11899851211491340226;  // kappa=0.5, r=0.25, y=-1.5
constexpr double kLogSt2 = 0.69100779392652357991;   // (1.2, 0.8), x=2
constexpr double kLogCc2 = 0.71544193279966125616;   // (1.2, 0.8, 0.9), x=2
constexpr double kExpCc = 4.11670039201173764;       // (1.2, 0.8, 0.9), y=1.5

std::vector<EntropyParams> sample_families() {
  return {EntropyParams::shannon(),
          EntropyParams::tsallis(0.5),
          EntropyParams::tsallis(1.5),
          EntropyParams::kaniadakis(0.3),
          EntropyParams::kaniadakis(-0.6),
          EntropyParams::kls(0.5, 0.2),
          EntropyParams::kls(0.3, -0.2),
          EntropyParams::schwammle_tsallis(1.2, 0.8),
          EntropyParams::schwammle_tsallis(0.8, 1.2),
          EntropyParams::corcino(1.2, 0.8, 0.9),
          EntropyParams::euler(0.6, -0.2)};
}

void expect_code(errc code, auto&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Validate, ListedCases) {
  const auto a = validate(EntropyParams::tsallis(0.5));
  EXPECT_TRUE(a.monotone_ok);
  EXPECT_TRUE(a.concave_ok);
  EXPECT_FALSE(validate(EntropyParams::tsallis(-0.5)).concave_ok);
  EXPECT_TRUE(validate(EntropyParams::tsallis(-0.5)).monotone_ok);
  EXPECT_FALSE(validate(EntropyParams::kls(0.5, 0.6)).monotone_ok);
  EXPECT_FALSE(validate(EntropyParams::kaniadakis(1.0)).monotone_ok);
  EXPECT_FALSE(validate(EntropyParams::euler(0.3, 0.2)).monotone_ok);
  EXPECT_FALSE(validate(EntropyParams::schwammle_tsallis(1.2, 0.8)).concave_ok);
  EXPECT_TRUE(validate(EntropyParams::schwammle_tsallis(0.8, 1.2)).concave_ok);
  EXPECT_FALSE(validate(EntropyParams::tsallis(NAN)).monotone_ok);
}

// Concavity range of KLS read as r <= 1/2 - |1/2 - |kappa||, checked against
// the sampled sign of d2log on a parameter grid.
TEST(Validate, KlsConcavityMatchesSampledSecondDerivative) {
  for (int i = 1; i <= 9; ++i) {
    for (int j = -i; j <= i; ++j) {
      if (i + j == 10) continue;  // boundary hi = 1, sign decided by the formula only
      const double kappa = i / 10.0, r = j / 10.0;
      const auto p = EntropyParams::kls(kappa, r);
      bool negative = true;
      for (int k = 0; k <= 40; ++k) {
        const double x = std::pow(10.0, -3.0 + 0.15 * k);
        if (!(d2log_d(p, x) < 0.0)) negative = false;
      }
      EXPECT_EQ(validate(p).concave_ok, negative) << describe(p);
    }
  }
}

TEST(LogD, Examples) {
  EXPECT_NEAR(log_d(EntropyParams::tsallis(0.5), 2.0), kLogQHalf2, 1e-15);
  EXPECT_NEAR(log_d(EntropyParams::kaniadakis(0.5), 2.0), kLogKappaHalf2, 1e-15);
  EXPECT_NEAR(log_d(EntropyParams::kls(0.5, 0.2), 2.0), kLogKls2, 1e-15);
  EXPECT_NEAR(log_d(EntropyParams::schwammle_tsallis(1.2, 0.8), 2.0), kLogSt2, 1e-15);
  EXPECT_NEAR(log_d(EntropyParams::corcino(1.2, 0.8, 0.9), 2.0), kLogCc2, 1e-15);
  EXPECT_NEAR(log_d(EntropyParams::euler(0.6, -0.2), 2.0), (std::pow(2.0, 0.6) - std::pow(2.0, -0.2)) / 0.8, 1e-15);
  for (const auto& p : sample_families()) EXPECT_EQ(log_d(p, 1.0), 0.0) << describe(p);
}

TEST(LogD, Errors) {
  expect_code(errc::domain, [] { log_d(EntropyParams::tsallis(0.5), 0.0); });
  expect_code(errc::domain, [] { log_d(EntropyParams::shannon(), -1.0); });
  expect_code(errc::domain, [] { log_d(EntropyParams::shannon(), INFINITY); });
  expect_code(errc::parameter, [] { log_d(EntropyParams::kls(0.5, 0.6), 2.0); });
  expect_code(errc::parameter, [] { log_d(EntropyParams::kaniadakis(1.5), 2.0); });
}

TEST(ExpD, Examples) {
  EXPECT_NEAR(exp_d(EntropyParams::tsallis(0.5), 1.0), 2.25, 1e-15);
  EXPECT_NEAR(exp_d(EntropyParams::kaniadakis(0.5), 1.0), kExpKappaHalf1, 1e-15);
  EXPECT_NEAR(exp_d(EntropyParams::kls(0.5, 0.2), 1.0), kExpKls1, 1e-11 * kExpKls1);
  EXPECT_NEAR(exp_d(EntropyParams::kls(0.5, 0.25), -1.5), kExpKlsNeg, 1e-11 * kExpKlsNeg);
  EXPECT_NEAR(exp_d(EntropyParams::corcino(1.2, 0.8, 0.9), 1.5), kExpCc, 1e-11 * kExpCc);
  for (const auto& p : sample_families()) EXPECT_EQ(exp_d(p, 0.0), 1.0) << describe(p);
}

TEST(ExpD, TsallisClipAndPole) {
  const auto c = exp_d_checked(EntropyParams::tsallis(0.5), -3.0);
  EXPECT_EQ(c.value, 0.0);
  EXPECT_TRUE(c.clipped);
  EXPECT_FALSE(exp_d_checked(EntropyParams::tsallis(0.5), -1.0).clipped);
  expect_code(errc::overflow, [] { exp_d(EntropyParams::tsallis(1.5), 3.0); });
  expect_code(errc::overflow, [] { exp_d(EntropyParams::shannon(), 1000.0); });
  expect_code(errc::domain, [] { exp_d(EntropyParams::shannon(), NAN); });
}

TEST(ExpD, NumericRangeLimits) {
  // log^CC_{1.2,0.8,0.9} is bounded below by log^T_0.9(e^-5); below it the exp clips.
  const auto below = exp_d_checked(EntropyParams::corcino(1.2, 0.8, 0.9), -10.0);
  EXPECT_EQ(below.value, 0.0);
  EXPECT_TRUE(below.clipped);
  // log^CC_{0.8,1.2,1.1} is bounded above.
  expect_code(errc::overflow, [] { exp_d(EntropyParams::corcino(0.8, 1.2, 1.1), 10.0); });
}

TEST(ExpD, CorcinoMatchesClosedComposition) {
  // exp_CC(y) = exp_ST(ln(exp^T_r(y))) inverts log^T_r(exp(log_ST(x))).
  const double q = 1.2, qp = 0.8, r = 0.9;
  for (double y : {-2.0, -0.5, 0.3, 1.5, 4.0}) {
    const double inner = std::log(detail::tsallis_exp(r, y).value);
    const double want = detail::st_exp(q, qp, inner).value;
    const double got = exp_d(EntropyParams::corcino(q, qp, r), y);
    EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, want)) << y;
  }
}

TEST(ExpD, RoundTripOnGrid) {
  for (const auto& p : sample_families()) {
    for (int k = 0; k < 25; ++k) {
      const double x = std::pow(10.0, -3.0 + 0.25 * k);
      EXPECT_NEAR(exp_d(p, log_d(p, x)), x, 1e-8 * std::max(1.0, x)) << describe(p) << " x=" << x;
    }
  }
}

TEST(Derivatives, Examples) {
  EXPECT_DOUBLE_EQ(dlog_d(EntropyParams::tsallis(0.5), 4.0), 0.5);
  EXPECT_DOUBLE_EQ(dlog_d(EntropyParams::kaniadakis(0.0), 3.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(dlog_d(EntropyParams::kls(0.5, 0.0), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(d2log_d(EntropyParams::tsallis(1.0), 1.0), -1.0);
  EXPECT_DOUBLE_EQ(d2log_d(EntropyParams::tsallis(2.0), 1.0), -2.0);
  EXPECT_DOUBLE_EQ(d2log_d(EntropyParams::kaniadakis(0.5), 1.0), -1.0);
}

TEST(Derivatives, SlopeOneAtOneAndFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  for (const auto& p : sample_families()) {
    EXPECT_NEAR(dlog_d(p, 1.0), 1.0, 1e-12) << describe(p);
    for (int k = 0; k < 10; ++k) {
      const double x = std::exp(u(rng));
      const double fd1 = finite_diff([&](double t) { return log_d(p, t); }, x, 1);
      const double fd2 = finite_diff([&](double t) { return log_d(p, t); }, x, 2);
      EXPECT_GT(dlog_d(p, x), 0.0);
      EXPECT_NEAR(fd1, dlog_d(p, x), 1e-6 * std::abs(dlog_d(p, x))) << describe(p) << " x=" << x;
      EXPECT_NEAR(fd2, d2log_d(p, x), 1e-4 * std::max(1.0, std::abs(d2log_d(p, x)))) << describe(p) << " x=" << x;
    }
  }
}

TEST(Duality, ConjugateParameters) {
  EXPECT_EQ(duality_conjugate(EntropyParams::tsallis(0.5)), EntropyParams::tsallis(1.5));
  EXPECT_EQ(duality_conjugate(EntropyParams::kaniadakis(0.3)), EntropyParams::kaniadakis(0.3));
  const auto st = duality_conjugate(EntropyParams::schwammle_tsallis(1.2, 0.8));
  ASSERT_NE(st.get_if<SchwammleTsallis>(), nullptr);
  EXPECT_NEAR(st.get_if<SchwammleTsallis>()->q, 0.8, 1e-15);
  EXPECT_NEAR(st.get_if<SchwammleTsallis>()->q_prime, 1.2, 1e-15);
  expect_code(errc::unsupported_family, [] { duality_conjugate(EntropyParams::corcino(1.2, 0.8, 0.9)); });
  expect_code(errc::unsupported_family, [] { duality_conjugate(EntropyParams::euler(0.6, -0.2)); });
}

TEST(Duality, IdentityHolds) {
  for (const auto& p : {EntropyParams::tsallis(0.5), EntropyParams::kaniadakis(0.3), EntropyParams::kls(0.5, 0.2),
                        EntropyParams::schwammle_tsallis(1.2, 0.8)}) {
    const auto dual = duality_conjugate(p);
    for (double x : {0.01, 0.3, 2.0, 50.0}) {
      const double a = log_d(p, 1.0 / x);
      EXPECT_NEAR(a + log_d(dual, x), 0.0, 1e-12 * (1.0 + std::abs(a))) << describe(p) << " x=" << x;
    }
  }
}

TEST(Limits, NearClassicalParametersApproachLn) {
  for (double x = 0.1; x <= 10.0; x *= 1.5) {
    EXPECT_NEAR(log_d(EntropyParams::tsallis(1.0 + 1e-6), x), std::log(x), 1e-4);
    EXPECT_NEAR(log_d(EntropyParams::tsallis(1.0 - 1e-6), x), std::log(x), 1e-4);
    EXPECT_NEAR(log_d(EntropyParams::kaniadakis(1e-6), x), std::log(x), 1e-4);
  }
}

TEST(Identities, KappaPowerRule) {
  const double kappa = 0.4;
  for (double lambda : {0.5, 1.5, 2.0}) {
    for (double x : {0.2, 1.7, 9.0}) {
      const double lhs = log_d(EntropyParams::kaniadakis(kappa), std::pow(x, lambda));
      const double rhs = lambda * log_d(EntropyParams::kaniadakis(lambda * kappa), x);
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(Identities, ExpReciprocal) {
  const auto k = EntropyParams::kaniadakis(0.5);
  for (double y : {0.1, 1.0, 5.0, 30.0}) {
    EXPECT_NEAR(exp_d(k, y) * exp_d(k, -y), 1.0, 1e-12);
    // For r != 0 the reciprocal partner carries -r.
    EXPECT_NEAR(exp_d(EntropyParams::kls(0.5, 0.2), -y) * exp_d(EntropyParams::kls(0.5, -0.2), y), 1.0, 1e-11);
  }
}

TEST(Asymptotics, KappaExpPowerLaw) {
  const double kappa = 0.5, x = 1e6;
  const double ratio = exp_d(EntropyParams::kaniadakis(kappa), x) / std::pow(2.0 * kappa * x, 1.0 / kappa);
  EXPECT_NEAR(ratio, 1.0, 1e-3);
}
