#pragma once

#include <charconv>
#include <span>
#include <string>

namespace wdc {

// Shortest decimal that reads back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string fmt_point(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + shortest(x[i]);
  return s + ")";
}

}  // namespace wdc
