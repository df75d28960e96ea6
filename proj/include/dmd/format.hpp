#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace dmd {

/// Shortest string that parses back to exactly `v` ('.' decimal separator,
/// independent of locale). Non-finite values print as inf, -inf, nan.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace dmd
