#pragma once

#include "evofam/types.hpp"

#include <cstdio>
#include <string>

namespace evofam::cli {

/// Shortest-round-trip decimal formatting; '.' decimal point, no locale.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Complex CSV cell: "re+imi" / "re-imi".
inline std::string fmt(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace evofam::cli
