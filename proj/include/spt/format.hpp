#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace spt {

/// Shortest decimal string that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// CSV cell: non-finite values are left blank.
inline std::string csv_cell(double x) { return std::isfinite(x) ? format_double(x) : std::string(); }

}  // namespace spt
