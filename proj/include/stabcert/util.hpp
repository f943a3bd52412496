#pragma once

#include <charconv>
#include <string>

namespace stabcert {

// Shortest round-trip, locale-independent double formatting.
inline std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace stabcert
