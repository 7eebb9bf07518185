#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsrd {

/// Relative gap |a-b| / max(a,b) below which the logarithmic mean is
/// evaluated by its series around the arithmetic mean.
inline constexpr double log_mean_ridge = 1e-8;

/// Logarithmic mean (a-b)/(ln a - ln b), extended by 0 when either argument
/// vanishes and by a on the diagonal.
inline double log_mean(double a, double b) {
  if (a < 0.0 || b < 0.0 || std::isnan(a) || std::isnan(b))
    throw std::domain_error("log_mean: arguments must be nonnegative");
  if (a == 0.0 || b == 0.0) return 0.0;
  if (a == b) return a;
  const double diff = a - b;
  if (std::abs(diff) <= log_mean_ridge * std::max(a, b)) {
    // a = m(1+r), b = m(1-r):  Λ = m r / artanh(r) = m (1 - r²/3 - 4r⁴/45 + O(r⁶))
    const double mean = 0.5 * (a + b);
    const double r = diff / (a + b);
    const double r2 = r * r;
    return mean * (1.0 - r2 / 3.0 - 4.0 * r2 * r2 / 45.0);
  }
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double gap = hi - lo;
  // log1p avoids cancellation in ln(hi) - ln(lo) when hi/lo is close to 1.
  if (gap < lo) return gap / std::log1p(gap / lo);
  return gap / (std::log(hi) - std::log(lo));
}

}  // namespace bsrd
