#pragma once

#include <complex>
#include <numbers>

#include "annulus/errors.hpp"

namespace annulus {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace annulus
