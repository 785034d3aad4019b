#include "efdyn/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace efdyn {

namespace {
Numerics g_numerics;
}

const Numerics& numerics() { return g_numerics; }

void set_numerics(const Numerics& n) { g_numerics = n; }

bool near(double a, double b, double tol) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

} // namespace efdyn
