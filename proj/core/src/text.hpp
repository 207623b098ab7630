#pragma once

#include <cstdio>
#include <string>

namespace wzm::detail {

/// Short form of a double for diagnostics.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace wzm::detail
