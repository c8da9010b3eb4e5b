#pragma once

#include <cmath>
#include <limits>

namespace pfluid {

/// log(e1/e2) / log(h1/h2); NaN when either error is zero or not finite.
inline double convergence_rate(double e1, double e2, double h1, double h2) {
  if (!(e1 > 0.0) || !(e2 > 0.0) || !std::isfinite(e1) || !std::isfinite(e2) || h1 == h2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::log(e1 / e2) / std::log(h1 / h2);
}

}  // namespace pfluid
