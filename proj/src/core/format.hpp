#pragma once

#include <charconv>
#include <string>

namespace bkz {

/// Locale-independent "%.17g" rendering; round-trips every finite double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace bkz
