#pragma once

#include "morsespec/morse.hpp"
#include "morsespec/specfun.hpp"

namespace morsespec::morse {

/// log u(x); throws OverflowError for x - x0 < -700.
double log_u(double x, const MorsePotential& pot);

namespace detail {

/// Options for W inside spectral sums.
inline specfun::WhittakerOptions spectral_whittaker() { return {1e-11, 25.0}; }

}  // namespace detail
}  // namespace morsespec::morse
