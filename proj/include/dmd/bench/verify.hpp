#pragma once

// Invariant suites behind `dmd verify` and the acceptance binary. Each check
// carries the acceptance criterion it evidences.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dmd/algebra.hpp"
#include "dmd/bench/problems.hpp"
#include "dmd/deformed.hpp"
#include "dmd/format.hpp"
#include "dmd/mirror.hpp"
#include "dmd/numerics.hpp"
#include "dmd/optim.hpp"

namespace dmd::bench {

struct Check {
  std::string suite;
  std::string name;
  int criterion = 0;
  bool passed = true;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"roundtrip", "algebra", "derivatives", "equivalence", "simplex", "descent"};
  return names;
}

/// Parameter grid used by the suites: every family, classical points included.
inline std::vector<EntropyParams> family_grid() {
  return {EntropyParams::shannon(),
          EntropyParams::tsallis(0.5),
          EntropyParams::tsallis(1.0),
          EntropyParams::tsallis(1.5),
          EntropyParams::kaniadakis(0.0),
          EntropyParams::kaniadakis(0.3),
          EntropyParams::kaniadakis(0.6),
          EntropyParams::kls(0.5, 0.0),
          EntropyParams::kls(0.5, 0.25),
          EntropyParams::kls(0.3, -0.2),
          EntropyParams::schwammle_tsallis(1.2, 0.8),
          EntropyParams::schwammle_tsallis(0.8, 1.2),
          EntropyParams::corcino(1.2, 0.8, 0.9),
          EntropyParams::corcino(0.8, 1.2, 1.1),
          EntropyParams::euler(0.6, -0.2),
          EntropyParams::euler(0.3, -0.5)};
}

/// True when exp_d goes through root finding rather than a closed form.
inline bool numeric_inverse(const EntropyParams& p) {
  const auto t = canonicalize(p).tag();
  return t == FamilyTag::corcino || t == FamilyTag::kls || t == FamilyTag::euler;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return x;
}

inline std::vector<double> lin_grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return x;
}

namespace detail {

/// Tracks the worst error of a check and the input that produced it.
class Tracker {
 public:
  Tracker(std::string suite, std::string name, int criterion, double tol) {
    c_.suite = std::move(suite);
    c_.name = std::move(name);
    c_.criterion = criterion;
    c_.tolerance = tol;
  }
  void observe(double err, const std::string& where) {
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    if (err > c_.max_error) {
      c_.max_error = err;
      worst_ = where;
    }
  }
  void fail(const std::string& why) {
    c_.passed = false;
    if (c_.detail.empty()) c_.detail = why;
  }
  template <class Fn>
  void guard(const std::string& where, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      fail(where + ": " + e.what());
    }
  }
  Check finish() {
    if (c_.max_error > c_.tolerance) {
      c_.passed = false;
      if (c_.detail.empty()) c_.detail = "worst at " + worst_;
    }
    return c_;
  }

 private:
  Check c_;
  std::string worst_;
};

inline double rel(double got, double want, double floor = 1.0) {
  return std::abs(got - want) / std::max(floor, std::abs(want));
}

}  // namespace detail

// ---- roundtrip: criteria 1 and 10 ------------------------------------------

inline std::vector<Check> suite_roundtrip() {
  std::vector<Check> out;
  const auto xs = log_grid(1e-3, 1e3, 50);
  for (const auto& p : family_grid()) {
    const bool numeric = numeric_inverse(p);
    detail::Tracker t("roundtrip", "exp_log " + describe(p), 1, numeric ? 1e-8 : 1e-10);
    for (double x : xs) {
      t.guard("x=" + format_double(x), [&] {
        t.observe(std::abs(exp_d(p, log_d(p, x)) - x) / std::max(1.0, x), "x=" + format_double(x));
      });
    }
    out.push_back(t.finish());
  }

  {
    detail::Tracker t("roundtrip", "lambert_tsallis_residual", 10, 1e-10);
    for (double q : {0.5, 1.0, 1.5, 2.5}) {
      for (double z : {-0.2, 0.0, 0.5, 1.0, 2.0, std::exp(1.0), 10.0}) {
        const std::string where = "q=" + format_double(q) + " z=" + format_double(z);
        t.guard(where, [&] {
          const auto w = lambert_tsallis_w(q, z);
          if (!w.converged) t.fail(where + ": not converged");
          t.observe(std::abs(w.root * dmd::detail::tsallis_exp(q, w.root).value - z), where);
        });
      }
    }
    out.push_back(t.finish());
  }
  {
    detail::Tracker t("roundtrip", "kls_inversion_residual", 10, 1e-10);
    for (auto [k, r] : {std::pair{0.5, 0.2}, {0.5, 0.25}, {0.3, -0.2}, {0.8, 0.5}}) {
      for (double y : lin_grid(-3.0, 5.0, 17)) {
        const std::string where = "kappa=" + format_double(k) + " r=" + format_double(r) + " y=" + format_double(y);
        t.guard(where, [&] { t.observe(std::abs(dmd::detail::kls_log(k, r, exp_kls_numeric(k, r, y)) - y), where); });
      }
    }
    out.push_back(t.finish());
  }
  {
    // |exp_kls - series| <= C |x|^4 with C = 2 (|c4| + 0.1 |c5|) + 1e-3, where
    // c4 = -(4r-1)((4r-1)^2 - 4k^2)/24 and
    // c5 = ((5r-1)^2 - 9k^2)((5r-1)^2 - k^2)/120 are the next Taylor coefficients.
    detail::Tracker t("roundtrip", "kls_series_quartic_bound", 10, 1.0);
    for (auto [k, r] : {std::pair{0.5, 0.0}, {0.5, 0.25}, {0.5, 0.2}, {0.3, -0.2}}) {
      const double a = 4.0 * r - 1.0, b = 5.0 * r - 1.0;
      const double c4 = -a * (a * a - 4.0 * k * k) / 24.0;
      const double c5 = (b * b - 9.0 * k * k) * (b * b - k * k) / 120.0;
      const double c = 2.0 * (std::abs(c4) + 0.1 * std::abs(c5)) + 1e-3;
      for (double x : lin_grid(-0.1, 0.1, 21)) {
        if (std::abs(x) < 1e-2) continue;
        const std::string where = "kappa=" + format_double(k) + " r=" + format_double(r) + " x=" + format_double(x);
        t.guard(where, [&] {
          const double diff = std::abs(exp_kls_numeric(k, r, x) - series_exp_kls(k, r, x));
          t.observe(diff / (c * std::pow(x, 4)), where);  // ratio must stay <= 1
        });
      }
    }
    out.push_back(t.finish());
  }
  return out;
}

// ---- derivatives: criteria 2 and 3 -----------------------------------------

inline std::vector<Check> suite_derivatives() {
  std::vector<Check> out;
  const auto xs = log_grid(1e-3, 1e3, 50);
  {
    detail::Tracker t("derivatives", "normalization", 2, 1e-12);
    for (const auto& p : family_grid()) {
      t.guard(describe(p), [&] {
        if (log_d(p, 1.0) != 0.0) t.fail(describe(p) + ": log_d(1) != 0");
        t.observe(std::abs(dlog_d(p, 1.0) - 1.0), describe(p));
      });
    }
    out.push_back(t.finish());
  }
  {
    detail::Tracker t("derivatives", "monotone_concave_signs", 2, 0.0);
    for (const auto& p : family_grid()) {
      const auto v = validate(p);
      for (double x : xs) {
        const std::string where = describe(p) + " x=" + format_double(x);
        t.guard(where, [&] {
          if (v.monotone_ok && !(dlog_d(p, x) > 0.0)) t.fail(where + ": dlog <= 0");
          if (v.concave_ok && !(d2log_d(p, x) < 0.0)) t.fail(where + ": d2log >= 0");
        });
      }
    }
    out.push_back(t.finish());
  }
  {
    detail::Tracker t("derivatives", "duality", 2, 1e-12);
    for (const auto& p : family_grid()) {
      const auto tag = p.tag();
      if (tag == FamilyTag::corcino || tag == FamilyTag::euler) continue;
      const auto dual = duality_conjugate(p);
      for (double x : xs) {
        const std::string where = describe(p) + " x=" + format_double(x);
        t.guard(where, [&] {
          const double a = log_d(p, 1.0 / x);
          t.observe(std::abs(a + log_d(dual, x)) / (1.0 + std::abs(a)), where);
        });
      }
    }
    out.push_back(t.finish());
  }
  {
    // Points are log-uniform on [0.1, 10]: the prescribed steps
    // (1e-6 max(1,x), 1e-4 max(1,x)) stay small relative to x there.
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
    detail::Tracker t1("derivatives", "dlog_vs_finite_difference", 3, 1e-6);
    detail::Tracker t2("derivatives", "d2log_vs_finite_difference", 3, 1e-4);
    for (const auto& p : family_grid()) {
      auto f = [&](double x) { return log_d(p, x); };
      for (int i = 0; i < 20; ++i) {
        const double x = std::exp(u(rng));
        const std::string where = describe(p) + " x=" + format_double(x);
        t1.guard(where, [&] { t1.observe(detail::rel(finite_diff(f, x, 1), dlog_d(p, x), 0.0), where); });
        t2.guard(where, [&] { t2.observe(detail::rel(finite_diff(f, x, 2), d2log_d(p, x), 0.0), where); });
      }
    }
    out.push_back(t1.finish());
    out.push_back(t2.finish());
  }
  return out;
}

// ---- algebra: criteria 4 and 7 ---------------------------------------------

inline std::vector<Check> suite_algebra() {
  std::vector<Check> out;
  const auto ab = lin_grid(-2.0, 2.0, 9);
  for (const auto& p : family_grid()) {
    const bool numeric = numeric_inverse(p);
    detail::Tracker t("algebra", "homomorphism " + describe(p), 4, numeric ? 1e-7 : 1e-9);
    for (double a : ab) {
      for (double b : ab) {
        const std::string where = "a=" + format_double(a) + " b=" + format_double(b);
        // Clip-free cases only: all three exponentials must exist and be unclipped.
        ClipResult ea, eb, es;
        try {
          ea = exp_d_checked(p, a);
          eb = exp_d_checked(p, b);
          es = exp_d_checked(p, a + b);
        } catch (const error&) {
          continue;
        }
        if (ea.clipped || eb.clipped || es.clipped) continue;
        t.guard(where, [&] {
          const auto prod = d_prod_checked(p, ea.value, eb.value);
          if (prod.clipped) t.fail(where + ": product clipped");
          t.observe(detail::rel(prod.value, es.value, 0.0), where);
        });
      }
    }
    out.push_back(t.finish());
  }

  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    detail::Tracker t("algebra", "operation_laws", 4, 1e-10);
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng), y = u(rng), z = u(rng);
      for (double k : {0.2, 0.5, 0.9}) {
        t.observe(detail::rel(kappa_prod(k, x, y), kappa_prod(k, y, x), 0.0), "kappa comm");
        t.observe(detail::rel(kappa_prod(k, kappa_prod(k, x, y), z), kappa_prod(k, x, kappa_prod(k, y, z)), 0.0), "kappa assoc");
        t.observe(detail::rel(kappa_prod(k, x, y), kappa_prod_closed(k, x, y), 0.0), "kappa arsinh form");
        t.observe(detail::rel(kappa_div(k, kappa_prod(k, x, y), y), x, 0.0), "kappa div");
        t.observe(std::abs(kappa_sum(k, kappa_sub(k, x, y), y) - x), "kappa sub");
        t.observe(detail::rel(d_prod(EntropyParams::kaniadakis(k), x, y), kappa_prod(k, x, y), 0.0), "d_prod kappa");
      }
      for (double q : {0.5, 0.8, 1.5}) {
        t.observe(std::abs(q_sum(q, q_sub(q, x, y), y) - x), "q sub");
        ClipResult pr;
        try {
          pr = q_prod_checked(q, x, y);
        } catch (const error&) {
          continue;  // q > 1 pole: no product exists
        }
        if (pr.clipped) continue;
        t.guard("q div", [&] { t.observe(detail::rel(q_div(q, pr.value, y), x, 0.0), "q div"); });
        t.guard("d_prod q", [&] { t.observe(detail::rel(d_prod(EntropyParams::tsallis(q), x, y), pr.value, 0.0), "d_prod q"); });
      }
    }
    out.push_back(t.finish());
  }

  {
    const auto xs = log_grid(1e-2, 1e2, 30);
    detail::Tracker t("algebra", "cross_family_identities", 7, 1e-12);
    namespace k = dmd::detail;
    for (double x : xs) {
      const std::string w = "x=" + format_double(x);
      auto obs = [&](double a, double b, const std::string& what) {
        t.observe(std::abs(a - b) / std::max(1.0, std::abs(b)), what + " " + w);
      };
      for (double kap : {0.3, 0.6}) {
        obs(k::kaniadakis_log(kap, x), 0.5 * (k::tsallis_log(1.0 + kap, x) + k::tsallis_log(1.0 - kap, x)), "kappa avg");
        for (double lam : {0.5, 2.0})
          obs(k::kaniadakis_log(kap, std::pow(x, lam)), lam * k::kaniadakis_log(lam * kap, x), "kappa power");
      }
      for (auto [kap, r] : {std::pair{0.5, 0.25}, {0.5, 0.2}, {0.3, -0.2}}) {
        const double kls = k::kls_log(kap, r, x);
        obs(kls, std::pow(x, r) * k::kaniadakis_log(kap, x), "kls x^r log_k");
        obs(kls, std::pow(x, r - kap) * k::tsallis_log(1.0 - 2.0 * kap, x), "kls x^(r-k) log_q");
        obs(k::euler_log(r + kap, r - kap, x), kls, "euler");
      }
      obs(k::kls_log(0.5, 0.0, x), k::kaniadakis_log(0.5, x), "kls r=0");
      obs(k::kls_log(0.25, 0.25, x), k::tsallis_log(0.5, x), "kls r=k");
      obs(k::kls_log(0.25, -0.25, x), k::tsallis_log(1.5, x), "kls r=-k");
      obs(k::kls_log(0.0, 0.0, x), std::log(x), "kls r=k=0");
    }
    out.push_back(t.finish());
  }
  return out;
}

// ---- equivalence: criteria 5, 6 and 11 --------------------------------------

inline std::vector<Check> suite_equivalence() {
  std::vector<Check> out;
  std::vector<EntropyParams> fams;
  for (const auto& p : family_grid())
    if (canonicalize(p).tag() != FamilyTag::shannon) fams.push_back(p);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uw(0.2, 3.0), ug(-1.0, 1.0), ue(0.01, 0.3), uq(0.3, 1.9);
  auto random_w = [&](int n) {
    std::vector<double> v(n);
    for (double& x : v) x = uw(rng);
    return WeightVector(v);
  };
  auto random_g = [&](int n) {
    std::vector<double> v(n);
    for (double& x : v) x = ug(rng);
    return v;
  };
  auto max_rel = [](const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, detail::rel(a[i], b[i], 0.0));
    return m;
  };

  {
    detail::Tracker t("equivalence", "geg_product_vs_md_explicit", 5, 1e-10);
    int done = 0;
    for (int i = 0; done < 100 && i < 1000; ++i) {
      const auto& p = fams[i % fams.size()];
      const auto w = random_w(8);
      const auto g = random_g(8);
      const double eta = ue(rng);
      const std::string where = describe(p) + " instance " + std::to_string(i);
      t.guard(where, [&] {
        const auto a = geg_step_product(p, w, g, eta);
        const auto b = md_step_explicit(MirrorMap{p}, w, g, eta);
        if (a.clipped || b.clipped) return;
        ++done;
        t.observe(max_rel(a.values, b.values), where);
      });
    }
    if (done < 100) t.fail("only " + std::to_string(done) + " clip-free instances");
    out.push_back(t.finish());
  }
  {
    detail::Tracker t("equivalence", "geg_simplified_q_vs_product", 5, 1e-10);
    int done = 0;
    for (int i = 0; done < 100 && i < 1000; ++i) {
      const double q = uq(rng);
      const auto w = random_w(8);
      const auto g = random_g(8);
      const double eta = ue(rng);
      const std::string where = "q=" + format_double(q) + " instance " + std::to_string(i);
      t.guard(where, [&] {
        const auto a = geg_step_simplified_q(q, w, g, eta);
        const auto b = geg_step_product(EntropyParams::tsallis(q), w, g, eta);
        if (a.clipped || b.clipped) return;
        ++done;
        t.observe(max_rel(a.values, b.values), where);
      });
    }
    if (done < 100) t.fail("only " + std::to_string(done) + " clip-free instances");
    out.push_back(t.finish());
  }
  {
    detail::Tracker t14("equivalence", "classical_q1_kappa0_vs_egu", 6, 1e-14);
    detail::Tracker tgd("equivalence", "euclidean_md_vs_gd_exact", 6, 0.0);
    detail::Tracker tkls("equivalence", "kls_r0_vs_kaniadakis", 6, 1e-9);
    for (int i = 0; i < 100; ++i) {
      const auto w = random_w(8);
      const auto g = random_g(8);
      const double eta = ue(rng);
      const auto egu = egu_step(w, g, eta).values;
      t14.guard("q=1", [&] { t14.observe(max_rel(geg_step_product(EntropyParams::tsallis(1.0), w, g, eta).values, egu), "q=1"); });
      t14.guard("kappa=0", [&] { t14.observe(max_rel(geg_step_product(EntropyParams::kaniadakis(0.0), w, g, eta).values, egu), "kappa=0"); });
      t14.guard("simplified q=1", [&] { t14.observe(max_rel(geg_step_simplified_q(1.0, w, g, eta).values, egu), "simplified q=1"); });
      const auto gd = gd_step(w, g, eta).values;
      const auto md = md_step_explicit(EuclideanMap{}, w, g, eta).values;
      for (std::size_t j = 0; j < gd.size(); ++j)
        if (gd[j] != md[j]) tgd.fail("component " + std::to_string(j) + " differs");
      for (double k : {0.3, 0.5, 0.8}) {
        const std::string where = "kappa=" + format_double(k);
        tkls.guard(where, [&] {
          const auto kan = geg_step_product(EntropyParams::kaniadakis(k), w, g, eta).values;
          tkls.observe(max_rel(geg_step_product(EntropyParams::kls(k, 0.0), w, g, eta).values, kan), where);
          // Same step with the root-finding inverse of log_{k,0} in place of the closed form.
          std::vector<double> numeric(w.size());
          for (std::size_t j = 0; j < w.size(); ++j)
            numeric[j] = exp_kls_numeric(k, 0.0, dmd::detail::kls_log(k, 0.0, w[j]) - eta * g[j]);
          tkls.observe(max_rel(numeric, kan), where + " numeric");
        });
      }
    }
    out.push_back(t14.finish());
    out.push_back(tgd.finish());
    out.push_back(tkls.finish());
  }
  {
    detail::Tracker t("equivalence", "beta_divergence_vs_definitional", 11, 1e-9);
    std::uniform_real_distribution<double> up(0.1, 5.0);
    for (double q : {0.5, 1.5}) {
      const MirrorMap map{EntropyParams::tsallis(q)};
      for (int i = 0; i < 20; ++i) {
        std::vector<double> a(4), b(4);
        for (double& v : a) v = up(rng);
        for (double& v : b) v = up(rng);
        const WeightVector wa(a), wb(b);
        const std::string where = "q=" + format_double(q) + " pair " + std::to_string(i);
        t.guard(where, [&] {
          const double closed = bregman(map, wa, wb);
          t.observe(std::abs(closed - bregman_definitional(map, wa, wb)) / std::max(1.0, std::abs(closed)), where);
        });
      }
    }
    out.push_back(t.finish());
  }
  return out;
}

// ---- simplex: criterion 9 ---------------------------------------------------

inline std::vector<Check> suite_simplex() {
  std::vector<Check> out;
  struct Case {
    EntropyParams params;
    RuleKind kind;
  };
  const std::vector<Case> cases = {
      {EntropyParams::shannon(), RuleKind::egu},
      {EntropyParams::tsallis(0.5), RuleKind::geg_product},
      {EntropyParams::tsallis(1.5), RuleKind::geg_simplified_q},
      {EntropyParams::kaniadakis(0.6), RuleKind::geg_product},
      {EntropyParams::kls(0.5, 0.25), RuleKind::mmd_diagonal},
      {EntropyParams::schwammle_tsallis(1.2, 0.8), RuleKind::mmd_diagonal},
      {EntropyParams::shannon(), RuleKind::gradient_descent},
  };
  for (const auto& c : cases) {
    detail::Tracker t("simplex", std::string("normalized_") + to_string(c.kind) + " " + describe(c.params), 9, 1e-12);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ug(-1.0, 1.0);
    WeightVector w = WeightVector::uniform_simplex(6);
    const UpdateRule rule{c.kind, Projection::simplex_normalize};
    t.guard("run", [&] {
      for (int step = 0; step < 1000; ++step) {
        std::vector<double> g(w.size());
        for (double& v : g) v = ug(rng);
        w = normalized_step(c.params, w, g, 0.05, rule).weights;
        t.observe(std::abs(w.sum() - 1.0), "step " + std::to_string(step));
        for (double v : w.values())
          if (!(v >= 0.0)) t.fail("negative weight at step " + std::to_string(step));
      }
    });
    out.push_back(t.finish());
  }
  return out;
}

// ---- descent: criterion 8 ---------------------------------------------------

struct DescentCell {
  std::string problem;
  EntropyParams params;
  RuleKind kind;
};

/// Rule x hyperparameter grid; GD and EGU ignore the family and run once per problem.
inline std::vector<DescentCell> descent_cells() {
  const std::vector<EntropyParams> fams = {
      EntropyParams::tsallis(0.5),   EntropyParams::tsallis(1.0),     EntropyParams::tsallis(1.5),
      EntropyParams::kaniadakis(0.0), EntropyParams::kaniadakis(0.3), EntropyParams::kaniadakis(0.6),
      EntropyParams::kls(0.5, 0.0),  EntropyParams::kls(0.5, 0.25)};
  std::vector<DescentCell> cells;
  for (const std::string prob : {"quadratic", "cross_entropy"}) {
    cells.push_back({prob, EntropyParams::shannon(), RuleKind::gradient_descent});
    cells.push_back({prob, EntropyParams::shannon(), RuleKind::egu});
    for (const auto& p : fams) {
      cells.push_back({prob, p, RuleKind::geg_product});
      cells.push_back({prob, p, RuleKind::mmd_diagonal});
      if (p.tag() == FamilyTag::tsallis) cells.push_back({prob, p, RuleKind::geg_simplified_q});
    }
  }
  return cells;
}

inline std::vector<Check> suite_descent() {
  std::vector<Check> out;
  for (const auto& c : descent_cells()) {
    const Problem prob = make_problem(c.problem);
    const bool simplex = prob.domain == Domain::unit_simplex;
    detail::Tracker t("descent", c.problem + " " + to_string(c.kind) + " " + describe(c.params), 8, 0.5);
    t.guard("run", [&] {
      const WeightVector w0 = simplex ? WeightVector::uniform_simplex(prob.dimension)
                                      : WeightVector(std::vector<double>(prob.dimension, 1.0));
      OptimizerConfig cfg;
      cfg.eta = 0.01;
      cfg.max_iters = 200;
      cfg.grad_tol = 0.0;
      const auto trace = run(prob, c.params, {c.kind, simplex ? Projection::simplex_normalize : Projection::none}, cfg, w0);
      if (trace.records.size() != 201) t.fail("stopped after " + std::to_string(trace.records.size() - 1) + " iterations");
      for (std::size_t i = 1; i < trace.records.size(); ++i)
        if (trace.records[i].loss > trace.records[i - 1].loss) t.fail("loss increased at iteration " + std::to_string(i));
      // Suboptimality gap ratio (L_T - L*) / (L_0 - L*).
      const double lstar = prob.optimal_value.value_or(0.0);
      t.observe((trace.records.back().loss - lstar) / (trace.records.front().loss - lstar), "final gap ratio");
    });
    out.push_back(t.finish());
  }
  return out;
}

/// Validation check for user-supplied parameters (`dmd verify --family ...`).
inline Check validation_check(const EntropyParams& p) {
  Check c{"validation", describe(p), 0, true, 0.0, 0.0, ""};
  const auto v = validate(p);
  c.passed = v.monotone_ok && v.concave_ok;
  for (const auto& m : v.messages) c.detail += (c.detail.empty() ? "" : "; ") + m;
  return c;
}

inline std::vector<Check> run_suite(const std::string& name) {
  if (name == "roundtrip") return suite_roundtrip();
  if (name == "algebra") return suite_algebra();
  if (name == "derivatives") return suite_derivatives();
  if (name == "equivalence") return suite_equivalence();
  if (name == "simplex") return suite_simplex();
  if (name == "descent") return suite_descent();
  throw error(errc::config, "unknown suite '" + name + "'");
}

}  // namespace dmd::bench
