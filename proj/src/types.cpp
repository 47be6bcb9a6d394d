#include "unitalcap/types.hpp"

#include <cmath>
#include <cstdio>

namespace unitalcap {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace unitalcap
