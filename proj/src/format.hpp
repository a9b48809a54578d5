#pragma once

#include <cstdio>
#include <string>

namespace choquard {

/// Fixed 17-significant-digit rendering used by every file format.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace choquard
