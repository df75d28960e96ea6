#pragma once

#include <stdexcept>
#include <string>

namespace dmd {

enum class errc {
  domain,              // argument outside the function's domain (x <= 0)
  parameter,           // hyperparameters outside the monotone range
  overflow,            // result not representable / pole of a deformed exp
  out_of_range_below,  // target below the range of a monotone map
  out_of_range_above,  // target above the range of a monotone map
  singularity,
  unsupported_family,
  non_convergence,
  dimension_mismatch,
  constraint,
  degenerate,
  config,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::domain: return "domain";
    case errc::parameter: return "parameter";
    case errc::overflow: return "overflow";
    case errc::out_of_range_below: return "out_of_range_below";
    case errc::out_of_range_above: return "out_of_range_above";
    case errc::singularity: return "singularity";
    case errc::unsupported_family: return "unsupported_family";
    case errc::non_convergence: return "non_convergence";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::constraint: return "constraint";
    case errc::degenerate: return "degenerate";
    case errc::config: return "config";
  }
  return "unknown";
}

/// Single exception type for the library; `code()` tells callers what failed.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  errc code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  errc code_;
  std::string detail_;
};

}  // namespace dmd
