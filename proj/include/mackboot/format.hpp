#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace mackboot {

// Locale-independent shortest-or-fixed-precision rendering for CSV/JSON text.
inline std::string format_double(double x, int precision = 17) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

}  // namespace mackboot
