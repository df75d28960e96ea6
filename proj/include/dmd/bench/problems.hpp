#pragma once

// Built-in benchmark objectives. Each one passes a finite-difference
// gradient check when it is constructed.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dmd/error.hpp"
#include "dmd/numerics.hpp"
#include "dmd/problem.hpp"

namespace dmd::bench {

using Matrix = std::vector<std::vector<double>>;

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

/// Throws if the analytic gradient disagrees with central differences
/// (relative 1e-5) at a few seeded feasible points.
inline void check_gradient(const Problem& p, unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> w(p.dimension);
    double s = 0.0;
    for (double& v : w) s += (v = u(rng));
    if (p.domain == Domain::unit_simplex)
      for (double& v : w) v /= s;
    const auto g = p.gradient(w);
    require_same_size(g.size(), p.dimension, "gradient");
    double scale = 1.0;
    for (double v : g) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < p.dimension; ++i) {
      auto fi = [&](double t) {
        auto x = w;
        x[i] = t;
        return p.loss(x);
      };
      const double fd = finite_diff(fi, w[i], 1);
      if (std::abs(fd - g[i]) > 1e-5 * scale)
        throw error(errc::config, "problem " + p.name + ": gradient check failed at component " + std::to_string(i));
    }
  }
}

/// 1/2 (w - w*)^T A (w - w*), A = H diag(1..10) H with the Householder
/// reflection H built from v = (1, ..., n); condition number 10.
inline Problem quadratic(std::size_t n = 5) {
  if (n < 2) throw error(errc::config, "quadratic needs n >= 2");
  std::vector<double> v(n);
  double vv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = static_cast<double>(i + 1);
    vv += v[i] * v[i];
  }
  Matrix h(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i][j] = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = 1.0 + 9.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) a[i][j] += h[i][k] * eig[k] * h[j][k];

  std::vector<double> opt(n);
  for (std::size_t i = 0; i < n; ++i) opt[i] = 0.5 + 0.5 * static_cast<double>(i);

  Problem p;
  p.name = "quadratic";
  p.dimension = n;
  p.domain = Domain::positive_orthant;
  p.loss = [a, opt](const std::vector<double>& w) {
    std::vector<double> d(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) d[i] = w[i] - opt[i];
    const auto ad = matvec(a, d);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += d[i] * ad[i];
    return 0.5 * s;
  };
  p.gradient = [a, opt](const std::vector<double>& w) {
    std::vector<double> d(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) d[i] = w[i] - opt[i];
    return matvec(a, d);
  };
  p.optimum = opt;
  p.optimal_value = 0.0;
  check_gradient(p);
  return p;
}

/// -sum p_i ln w_i on the unit simplex; minimized at w = p with value H(p).
inline Problem cross_entropy(std::vector<double> target = {0.4, 0.25, 0.15, 0.12, 0.08}) {
  double s = 0.0, h = 0.0;
  for (double v : target) {
    if (!(v > 0.0)) throw error(errc::config, "cross-entropy target must be positive");
    s += v;
  }
  for (double& v : target) {
    v /= s;
    h -= v * std::log(v);
  }
  Problem p;
  p.name = "cross_entropy";
  p.dimension = target.size();
  p.domain = Domain::unit_simplex;
  p.loss = [target](const std::vector<double>& w) {
    double l = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) l -= target[i] * std::log(w[i]);
    return l;
  };
  p.gradient = [target](const std::vector<double>& w) {
    std::vector<double> g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = -target[i] / w[i];
    return g;
  };
  p.optimum = target;
  p.optimal_value = h;
  check_gradient(p);
  return p;
}

/// 1/2 |A w - y|^2 over w >= 0 with a fixed 8 x 5 design; the data are built
/// so that the unconstrained minimizer has a negative entry.
inline Problem nnls() {
  const std::size_t m = 8, n = 5;
  Matrix a(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = 1.0 / (1.0 + static_cast<double>(i + j)) + (i == j ? 1.0 : 0.0);
  const std::vector<double> w_true = {1.0, 0.5, -0.3, 2.0, 0.25};
  auto y = matvec(a, w_true);

  Problem p;
  p.name = "nnls";
  p.dimension = n;
  p.domain = Domain::positive_orthant;
  p.loss = [a, y](const std::vector<double>& w) {
    const auto r = matvec(a, w);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += (r[i] - y[i]) * (r[i] - y[i]);
    return 0.5 * s;
  };
  p.gradient = [a, y](const std::vector<double>& w) {
    auto r = matvec(a, w);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
    std::vector<double> g(w.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) g[j] += a[i][j] * r[i];
    return g;
  };
  check_gradient(p);
  return p;
}

inline std::vector<std::string> problem_names() { return {"quadratic", "cross_entropy", "nnls"}; }

inline Problem make_problem(const std::string& name) {
  if (name == "quadratic") return quadratic();
  if (name == "cross_entropy") return cross_entropy();
  if (name == "nnls") return nnls();
  throw error(errc::config, "unknown problem '" + name + "'");
}

}  // namespace dmd::bench
