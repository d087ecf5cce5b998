#pragma once

#include <cstdio>
#include <string>

namespace netcomm {

// Rounds to `digits` significant digits so that the JSON writer's shortest
// round-trip formatting prints at most that many.
inline double round_sig(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::stod(buf);
}

}  // namespace netcomm
