#pragma once

// Reciprocal hyperbolic functions that stay finite and accurate for large
// |z|, where the textbook 1/sinh(z) would overflow in the intermediate.

#include <cmath>

namespace ancient::hyp {

/// csch z = sign(z) * 2 e^{-|z|} / (1 - e^{-2|z|})
inline double csch(double z) {
  const double a = std::fabs(z);
  const double value = 2.0 * std::exp(-a) / -std::expm1(-2.0 * a);
  return std::copysign(value, z);
}

/// sech z = 2 e^{-|z|} / (1 + e^{-2|z|})
inline double sech(double z) {
  const double e = std::exp(-std::fabs(z));
  return 2.0 * e / (1.0 + e * e);
}

inline double coth(double z) { return 1.0 / std::tanh(z); }

}  // namespace ancient::hyp
