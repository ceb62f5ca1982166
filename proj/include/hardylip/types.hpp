#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hardylip {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Raised when a curve or cone violates its geometric invariants.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the conformal-map solver and by Newton inversion of the map.
class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by contour quadrature when the tail certificate or panel budget is insufficient.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by Hardy-space operations whose preconditions fail (zero mismatch,
/// evaluation too close to the curve, wrong domain tag).
class HardyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Points on the real axis are always treated as limits from the upper half
// plane, so a negative zero imaginary part is normalized to +0.
inline cplx upper_limit(cplx z) {
  if (!(z.imag() > 0.0)) return {z.real(), 0.0};
  return z;
}

}  // namespace hardylip
