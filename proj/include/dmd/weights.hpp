#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "dmd/error.hpp"
#include "dmd/format.hpp"

namespace dmd {

enum class Domain { positive_orthant, unit_simplex };

inline constexpr double kSimplexTol = 1e-12;

/// Iterate w_t. Entries are finite and nonnegative; simplex-tagged vectors
/// sum to 1 within 1e-12.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<double> values, Domain domain = Domain::positive_orthant)
      : values_(std::move(values)), domain_(domain) {
    for (double v : values_)
      if (!std::isfinite(v) || v < 0.0) throw error(errc::domain, "weights must be finite and nonnegative, got " + format_double(v));
    if (domain_ == Domain::unit_simplex) {
      if (values_.empty()) throw error(errc::constraint, "empty simplex vector");
      const double s = sum();
      if (std::abs(s - 1.0) > kSimplexTol) throw error(errc::constraint, "simplex weights sum to " + format_double(s));
    }
  }

  static WeightVector uniform_simplex(std::size_t n) {
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)), Domain::unit_simplex);
  }

  /// Divides by the 1-norm and tags the result as simplex.
  static WeightVector normalized(std::vector<double> values) {
    const double s = std::accumulate(values.begin(), values.end(), 0.0);
    if (!(s > 0.0)) throw error(errc::degenerate, "cannot normalize a vector with nonpositive sum");
    for (double& v : values) v /= s;
    return WeightVector(std::move(values), Domain::unit_simplex);
  }

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  Domain domain() const noexcept { return domain_; }
  bool on_simplex() const noexcept { return domain_ == Domain::unit_simplex; }

  double sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> values_;
  Domain domain_ = Domain::positive_orthant;
};

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw error(errc::dimension_mismatch, std::string(what) + ": sizes " + std::to_string(a) + " and " + std::to_string(b));
}

}  // namespace dmd
