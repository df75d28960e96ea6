#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dmd/weights.hpp"

namespace dmd {

/// Objective with analytic gradient over a weight domain.
struct Problem {
  std::string name;
  std::size_t dimension = 0;
  std::function<double(const std::vector<double>&)> loss;
  std::function<std::vector<double>(const std::vector<double>&)> gradient;
  Domain domain = Domain::positive_orthant;
  std::optional<std::vector<double>> optimum;
  std::optional<double> optimal_value;
};

}  // namespace dmd
