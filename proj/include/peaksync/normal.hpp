#pragma once

#include <cmath>
#include <numbers>

namespace peaksync {

// Gaussian distribution functions built on the C library's erf/erfc. On
// glibc these are the fdlibm rational approximations (s_erf.c), accurate to
// under 1 ulp; the tests pin them against tabulated high-precision values.

/// P(Z <= z) for a standard normal Z.
inline double standard_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

/// P(Z > z), computed directly so that far-tail masses keep relative accuracy.
inline double standard_normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

/// P(-z <= Z <= z) for z >= 0.
inline double standard_normal_central_mass(double z) {
    return std::erf(z / std::numbers::sqrt2);
}

}  // namespace peaksync
