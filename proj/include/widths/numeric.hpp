#pragma once

// Small shared numeric helpers.

namespace widths {
namespace detail {

// Integer power, exact product chain for small exponents.
inline double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace detail
}  // namespace widths
