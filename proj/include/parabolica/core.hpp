// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace parabolica {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Raised when an argument lies outside the domain of a map (poles, slits,
// parameters out of range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when an iterative numerical procedure fails to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// z^n by binary exponentiation; n >= 0.
template <typename T>
T ipow(T base, unsigned n) {
  T result{1};
  while (n != 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n != 0) base *= base;
  }
  return result;
}

// e^{2 pi i t} for complex t. Real parts that are exact multiples of 1/4 are
// mapped to exact unit values so that real-symmetric parameters keep exact
// conjugation symmetry.
inline cplx unit_phase(cplx t) {
  double re = t.real() - std::floor(t.real());
  const double modulus = std::exp(-kTwoPi * t.imag());
  double c = 0.0;
  double s = 0.0;
  if (re == 0.0) {
    c = 1.0;
  } else if (re == 0.25) {
    s = 1.0;
  } else if (re == 0.5) {
    c = -1.0;
  } else if (re == 0.75) {
    s = -1.0;
  } else {
    c = std::cos(kTwoPi * re);
    s = std::sin(kTwoPi * re);
  }
  return {modulus * c, modulus * s};
}

inline cplx unit_phase(double t) { return unit_phase(cplx{t, 0.0}); }

// Principal q-th root.
inline cplx principal_root(cplx z, int q) {
  if (z == cplx{0.0, 0.0}) return z;
  return std::polar(std::pow(std::abs(z), 1.0 / q), std::arg(z) / q);
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

}  // namespace parabolica
